#include <doctest.h>

#include <filesystem>

#include "svi/error.hpp"
#include "svi/game_file.hpp"
#include "test_support.hpp"

using namespace svi;
using svi::test::error_code;

TEST_CASE("game json round trip is exact") {
  GameGenConfig cfg;
  cfg.n = 3;
  cfg.d1 = 2;
  cfg.d2 = 3;
  cfg.seed = 17;
  const QuadraticGame g = generate_game(cfg);
  const std::string text = game_to_json(g, cfg);
  const GameDocument doc = game_from_json(text);
  REQUIRE(doc.generator.has_value());
  CHECK(doc.generator->seed == 17);
  CHECK(doc.generator->d2 == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(doc.game->jacobian(i) == g.jacobian(i));
    CHECK(doc.game->offset(i) == g.offset(i));
  }
  CHECK(game_to_json(*doc.game, doc.generator) == text);
}

TEST_CASE("game files on disk") {
  const QuadraticGame g = svi::test::scalar_game(2.0, 1.0, 3.0, 1.0, -1.0);
  const auto path = std::filesystem::temp_directory_path() / "svi_game_file_test.json";
  write_game(path, g);
  const GameDocument doc = read_game(path);
  CHECK_FALSE(doc.generator.has_value());
  CHECK(doc.game->jacobian(0) == g.jacobian(0));
  std::filesystem::remove(path);
  CHECK(error_code([&] { read_game(path); }) == ErrorCode::IoError);
}

TEST_CASE("malformed game files") {
  CHECK(error_code([] { game_from_json("{not json"); }) == ErrorCode::ParseError);
  CHECK(error_code([] { game_from_json(R"({"format_version": 2})"); }) == ErrorCode::ParseError);
  const QuadraticGame g = svi::test::scalar_game(2.0, 1.0, 3.0);
  std::string text = game_to_json(g);
  const auto pos = text.find("\"A\"");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 3, "\"Q\"");
  CHECK(error_code([&] { game_from_json(text); }) == ErrorCode::ParseError);
}
