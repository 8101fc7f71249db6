#include "svi/game_file.hpp"

#include <json.hpp>

#include "svi/error.hpp"

namespace svi {

using nlohmann::ordered_json;

namespace {

ordered_json matrix_json(const Matrix& m) { return ordered_json(to_row_major(m)); }

ordered_json vector_json(const Vector& v) { return ordered_json(std::vector<double>(v.data(), v.data() + v.size())); }

std::vector<double> numbers(const ordered_json& node, const char* field, std::size_t expected) {
  if (!node.contains(field) || !node.at(field).is_array()) {
    throw Error(ErrorCode::ParseError, std::string("component is missing array '") + field + "'");
  }
  std::vector<double> out;
  out.reserve(expected);
  for (const auto& x : node.at(field)) {
    if (!x.is_number()) throw Error(ErrorCode::ParseError, std::string("non-numeric entry in '") + field + "'");
    out.push_back(x.get<double>());
  }
  if (out.size() != expected) {
    throw Error(ErrorCode::ParseError, std::string("'") + field + "' has " + std::to_string(out.size()) +
                                           " entries, expected " + std::to_string(expected));
  }
  return out;
}

std::size_t count_field(const ordered_json& doc, const char* field) {
  if (!doc.contains(field) || !doc.at(field).is_number_unsigned()) {
    throw Error(ErrorCode::ParseError, std::string("header field '") + field + "' must be a non-negative integer");
  }
  return doc.at(field).get<std::size_t>();
}

}  // namespace

std::string game_to_json(const QuadraticGame& game, const std::optional<GameGenConfig>& generator) {
  ordered_json doc;
  doc["format_version"] = kGameFormatVersion;
  doc["n"] = game.num_components();
  doc["d1"] = game.d1();
  doc["d2"] = game.d2();
  doc["seed"] = generator ? generator->seed : 0;
  if (generator) {
    doc["generator"] = {{"mu_A", generator->mu_A}, {"L_A", generator->L_A}, {"mu_C", generator->mu_C},
                        {"L_C", generator->L_C},   {"mu_B", generator->mu_B}, {"L_B", generator->L_B}};
  } else {
    doc["generator"] = nullptr;
  }
  ordered_json comps = ordered_json::array();
  for (const auto& c : game.components()) {
    comps.push_back({{"A", matrix_json(c.A)},
                     {"B", matrix_json(c.B)},
                     {"C", matrix_json(c.C)},
                     {"a", vector_json(c.a)},
                     {"c", vector_json(c.c)}});
  }
  doc["components"] = std::move(comps);
  return doc.dump(1) + "\n";
}

GameDocument game_from_json(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "game file must hold an object");
  if (!doc.contains("format_version") || doc.at("format_version") != kGameFormatVersion) {
    throw Error(ErrorCode::ParseError, "unsupported or missing format_version");
  }
  const std::size_t n = count_field(doc, "n");
  const std::size_t d1 = count_field(doc, "d1");
  const std::size_t d2 = count_field(doc, "d2");
  const std::uint64_t seed = count_field(doc, "seed");
  if (!doc.contains("components") || !doc.at("components").is_array() || doc.at("components").size() != n) {
    throw Error(ErrorCode::ParseError, "'components' must be an array of n entries");
  }

  std::vector<GameComponent> comps;
  comps.reserve(n);
  for (const auto& node : doc.at("components")) {
    GameComponent g;
    g.A = from_row_major(d1, d1, numbers(node, "A", d1 * d1));
    g.B = from_row_major(d1, d2, numbers(node, "B", d1 * d2));
    g.C = from_row_major(d2, d2, numbers(node, "C", d2 * d2));
    const auto a = numbers(node, "a", d1);
    const auto c = numbers(node, "c", d2);
    g.a = Eigen::Map<const Vector>(a.data(), static_cast<Eigen::Index>(d1));
    g.c = Eigen::Map<const Vector>(c.data(), static_cast<Eigen::Index>(d2));
    comps.push_back(std::move(g));
  }

  GameDocument out;
  out.game = std::make_shared<const QuadraticGame>(std::move(comps));
  if (doc.contains("generator") && doc.at("generator").is_object()) {
    const auto& gen = doc.at("generator");
    GameGenConfig cfg;
    cfg.n = n;
    cfg.d1 = d1;
    cfg.d2 = d2;
    cfg.seed = seed;
    try {
      cfg.mu_A = gen.at("mu_A").get<double>();
      cfg.L_A = gen.at("L_A").get<double>();
      cfg.mu_C = gen.at("mu_C").get<double>();
      cfg.L_C = gen.at("L_C").get<double>();
      cfg.mu_B = gen.at("mu_B").get<double>();
      cfg.L_B = gen.at("L_B").get<double>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError, std::string("generator block: ") + e.what());
    }
    out.generator = cfg;
  }
  return out;
}

void write_game(const std::filesystem::path& path, const QuadraticGame& game,
                const std::optional<GameGenConfig>& generator) {
  write_text(path, game_to_json(game, generator));
}

GameDocument read_game(const std::filesystem::path& path) { return game_from_json(read_text(path)); }

}  // namespace svi
