#include "svi/experiments.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "svi/error.hpp"

namespace svi {

void validate(const GameGenConfig& cfg) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidRange, what); };
  if (cfg.n == 0 || cfg.d1 == 0 || cfg.d2 == 0) fail("n, d1 and d2 must be at least 1");
  if (!(cfg.mu_A > 0.0 && cfg.mu_A <= cfg.L_A)) fail("need 0 < mu_A <= L_A");
  if (!(cfg.mu_C > 0.0 && cfg.mu_C <= cfg.L_C)) fail("need 0 < mu_C <= L_C");
  if (!(cfg.mu_B >= 0.0 && cfg.mu_B <= cfg.L_B)) fail("need 0 <= mu_B <= L_B");
  if (!std::isfinite(cfg.L_A) || !std::isfinite(cfg.L_B) || !std::isfinite(cfg.L_C)) fail("bounds must be finite");
}

namespace {

Vector uniform_diagonal(std::size_t dim, double lo, double hi, Rng& rng) {
  Vector d(static_cast<Eigen::Index>(dim));
  for (Eigen::Index k = 0; k < d.size(); ++k) d(k) = rng.uniform(lo, hi);
  return d;
}

void force_extremes(Vector& d, std::size_t component, std::size_t n, double lo, double hi) {
  Eigen::Index at = 0;
  if (component == 0) {
    d.minCoeff(&at);
    d(at) = lo;
  }
  if (component + 1 == n) {
    d.maxCoeff(&at);
    d(at) = hi;
  }
}

Matrix symmetric_from_spectrum(const Vector& d, Rng& rng) {
  const Matrix q = random_orthogonal(static_cast<std::size_t>(d.size()), rng);
  const Matrix m = q * d.asDiagonal() * q.transpose();
  return 0.5 * (m + m.transpose());
}

}  // namespace

QuadraticGame generate_game(const GameGenConfig& cfg, Rng& rng) {
  validate(cfg);
  const auto d1 = static_cast<Eigen::Index>(cfg.d1);
  const auto d2 = static_cast<Eigen::Index>(cfg.d2);
  const std::size_t rank = std::min(cfg.d1, cfg.d2);
  std::vector<GameComponent> components;
  components.reserve(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    GameComponent g;
    Vector da = uniform_diagonal(cfg.d1, cfg.mu_A, cfg.L_A, rng);
    force_extremes(da, i, cfg.n, cfg.mu_A, cfg.L_A);
    g.A = symmetric_from_spectrum(da, rng);

    Vector dc = uniform_diagonal(cfg.d2, cfg.mu_C, cfg.L_C, rng);
    force_extremes(dc, i, cfg.n, cfg.mu_C, cfg.L_C);
    g.C = symmetric_from_spectrum(dc, rng);

    const Matrix u = random_orthogonal(cfg.d1, rng);
    const Matrix v = random_orthogonal(cfg.d2, rng);
    const Vector s = uniform_diagonal(rank, cfg.mu_B, cfg.L_B, rng);
    Matrix sigma = Matrix::Zero(d1, d2);
    for (Eigen::Index k = 0; k < s.size(); ++k) sigma(k, k) = s(k);
    g.B = u * sigma * v.transpose();

    g.a = rng.normal_vector(cfg.d1);
    g.c = rng.normal_vector(cfg.d2);
    components.push_back(std::move(g));
  }
  return QuadraticGame(std::move(components));
}

QuadraticGame generate_game(const GameGenConfig& cfg) {
  Rng rng(cfg.seed);
  return generate_game(cfg, rng);
}

ProblemConstants compute_problem_constants(const QuadraticGame& game, const SamplingScheme& scheme) {
  ProblemConstants pc;
  pc.game = game_constants(game);
  pc.ec = ec_constants(pc.game, scheme);
  pc.game = with_condition_number(pc.game, pc.ec);
  pc.hamiltonian_full = hamiltonian_constants(game, SamplingScheme::full_batch(game.num_components()));
  try {
    pc.hamiltonian = hamiltonian_constants(game, scheme);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UnsupportedScheme) throw;
  }
  return pc;
}

GameGenConfig tune_to_condition_number(GameGenConfig cfg, double target_kappa, const std::string& scheme_name,
                                       std::optional<std::size_t> batch) {
  validate(cfg);
  if (!(target_kappa > 0.0)) throw Error(ErrorCode::InvalidRange, "target condition number must be positive");
  const SamplingScheme scheme = parse_scheme(scheme_name, cfg.n, batch);
  const double base_lo = cfg.L_B > 0.0 ? cfg.mu_B : 0.0;
  const double base_hi = cfg.L_B > 0.0 ? cfg.L_B : 1.0;

  auto scaled = [&](double s) {
    GameGenConfig c = cfg;
    c.mu_B = s * base_lo;
    c.L_B = s * base_hi;
    return c;
  };
  auto kappa = [&](double s) {
    const QuadraticGame game = generate_game(scaled(s));
    const GameConstants gc = game_constants(game);
    return ec_constants(gc, scheme).ell_xi / gc.mu;
  };
  auto close = [&](double k) { return std::abs(k - target_kappa) <= 0.1 * target_kappa; };

  const double floor_kappa = kappa(0.0);
  if (close(floor_kappa)) return scaled(0.0);
  if (target_kappa < floor_kappa) {
    throw Error(ErrorCode::InvalidRange, "kappa_G is already " + format_double(floor_kappa) +
                                             " without coupling; lower the A/C eigenvalue spread instead");
  }
  double lo = 0.0;
  double hi = 1.0;
  int doublings = 0;
  while (kappa(hi) < target_kappa) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > 40) throw Error(ErrorCode::InvalidRange, "could not reach the target condition number");
  }
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double k = kappa(mid);
    if (std::abs(k - target_kappa) <= 0.01 * target_kappa) return scaled(mid);
    (k < target_kappa ? lo : hi) = mid;
  }
  const double k_hi = kappa(hi);
  if (close(k_hi)) return scaled(hi);
  throw Error(ErrorCode::InvalidRange, "condition number is not attainable within 10%");
}

std::string MethodSpec::display_name() const {
  if (!label.empty()) return label;
  std::string name = to_string(method);
  if (schedule == ScheduleChoice::switching) name += "-switching";
  return name;
}

namespace {

const HamiltonianConstants& stochastic_hamiltonian(const ProblemConstants& pc) {
  if (!pc.hamiltonian) {
    throw Error(ErrorCode::UnsupportedScheme, "Hamiltonian methods need single-element or full-batch sampling");
  }
  return *pc.hamiltonian;
}

}  // namespace

StepSizeSchedule resolve_schedule(const MethodSpec& spec, const ProblemConstants& pc) {
  const GameConstants& gc = pc.game;
  if (spec.schedule == ScheduleChoice::fixed) return StepSizeSchedule::constant(spec.alpha, spec.gamma);
  const bool switching = spec.schedule == ScheduleChoice::switching;
  switch (spec.method) {
    case Method::sgda:
      return switching ? StepSizeSchedule::sgda_switching(pc.ec.ell_xi, gc.mu)
                       : StepSizeSchedule::constant(1.0 / (2.0 * pc.ec.ell_xi), 0.0);
    case Method::gda:
      return switching ? StepSizeSchedule::sgda_switching(gc.ell, gc.mu)
                       : StepSizeSchedule::constant(1.0 / (2.0 * gc.ell), 0.0);
    case Method::sco: {
      const auto& h = stochastic_hamiltonian(pc);
      return switching ? StepSizeSchedule::sco_switching(pc.ec.ell_xi, h.calL_H, gc.mu, h.mu_H)
                       : StepSizeSchedule::constant(1.0 / (4.0 * pc.ec.ell_xi), 1.0 / (4.0 * h.calL_H));
    }
    case Method::shgd: {
      const auto& h = stochastic_hamiltonian(pc);
      return switching ? StepSizeSchedule::sco_switching(0.0, h.calL_H, 0.0, h.mu_H)
                       : StepSizeSchedule::constant(0.0, 1.0 / (2.0 * h.calL_H));
    }
    case Method::co: {
      const auto& h = pc.hamiltonian_full;
      return switching ? StepSizeSchedule::sco_switching(gc.ell, h.L_H, gc.mu, h.mu_H)
                       : StepSizeSchedule::constant(1.0 / (4.0 * gc.ell), 1.0 / (4.0 * h.L_H));
    }
  }
  throw Error(ErrorCode::InvalidConfig, "unknown method");
}

BoundSetup bound_for(const MethodSpec& spec, const ProblemConstants& pc) {
  const GameConstants& gc = pc.game;
  const StepSizeSchedule schedule = resolve_schedule(spec, pc);
  const StepSizes s = schedule.at(0);
  const bool switching = spec.schedule == ScheduleChoice::switching;
  BoundParams p;
  p.mu = gc.mu;
  p.alpha = s.alpha;
  p.gamma = s.gamma;
  switch (spec.method) {
    case Method::sgda:
    case Method::gda: {
      const bool det = spec.method == Method::gda;
      p.ell_xi = det ? gc.ell : pc.ec.ell_xi;
      p.sigma_sq = det ? 0.0 : pc.ec.sigma_sq;
      p.gamma = 0.0;
      return {switching ? BoundKind::sgda_switching : BoundKind::sgda_constant, p};
    }
    case Method::sco:
    case Method::co: {
      const bool det = spec.method == Method::co;
      const HamiltonianConstants& h = det ? pc.hamiltonian_full : stochastic_hamiltonian(pc);
      p.ell_xi = det ? gc.ell : pc.ec.ell_xi;
      p.sigma_sq = det ? 0.0 : pc.ec.sigma_sq;
      p.mu_H = h.mu_H;
      p.calL_H = det ? h.L_H : h.calL_H;
      p.sigma_H_sq = det ? 0.0 : h.sigma_H_sq;
      return {switching ? BoundKind::sco_switching : BoundKind::sco_constant, p};
    }
    case Method::shgd: {
      const auto& h = stochastic_hamiltonian(pc);
      // Pure Hamiltonian descent: the operator term and its modulus drop out.
      p.mu = 0.0;
      p.alpha = 0.0;
      p.mu_H = h.mu_H;
      p.calL_H = h.calL_H;
      p.sigma_H_sq = h.sigma_H_sq;
      return {switching ? BoundKind::sco_switching : BoundKind::shgd_constant, p};
    }
  }
  throw Error(ErrorCode::InvalidConfig, "unknown method");
}

std::vector<RunTrace> run_seeds(const std::shared_ptr<const QuadraticGame>& game, const MethodSpec& spec,
                                const SamplingScheme& scheme, const StepSizeSchedule& schedule,
                                std::size_t iterations, std::size_t seeds, std::uint64_t base_seed,
                                std::size_t threads, bool record_iterates) {
  if (seeds == 0) throw Error(ErrorCode::InvalidConfig, "need at least one seed");
  std::vector<RunTrace> traces(seeds);
  auto one = [&](std::size_t s) {
    RunConfig rc;
    rc.method = spec.method;
    rc.op = game;
    rc.scheme = scheme;
    rc.schedule = schedule;
    rc.iterations = iterations;
    rc.seed = base_seed + s;
    rc.record_iterates = record_iterates;
    traces[s] = run(rc);
  };

  const std::size_t workers = std::min(std::max<std::size_t>(threads, 1), seeds);
  if (workers == 1) {
    for (std::size_t s = 0; s < seeds; ++s) one(s);
    return traces;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t s = next++; s < seeds; s = next++) {
        try {
          one(s);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return traces;
}

MethodSeries aggregate(const std::string& method, const std::vector<RunTrace>& traces) {
  MethodSeries out;
  out.method = method;
  std::size_t longest = 0;
  for (const auto& t : traces) longest = std::max(longest, t.dist_sq.size());
  out.rows.reserve(longest);
  for (std::size_t k = 0; k < longest; ++k) {
    double sum = 0.0;
    std::size_t m = 0;
    for (const auto& t : traces) {
      if (k < t.dist_sq.size()) {
        sum += t.dist_sq[k] / t.dist_sq.front();
        ++m;
      }
    }
    const double mean = sum / static_cast<double>(m);
    double ss = 0.0;
    for (const auto& t : traces) {
      if (k < t.dist_sq.size()) {
        const double dev = t.dist_sq[k] / t.dist_sq.front() - mean;
        ss += dev * dev;
      }
    }
    const double half = m > 1 ? 1.96 * std::sqrt(ss / static_cast<double>(m - 1)) / std::sqrt(static_cast<double>(m))
                              : 0.0;
    out.rows.push_back({k, mean, mean - half, mean + half, m});
  }
  return out;
}

AggregateTable run_experiment(const ExperimentConfig& cfg) {
  if (!cfg.game) throw Error(ErrorCode::InvalidConfig, "experiment needs a game");
  if (cfg.methods.empty()) throw Error(ErrorCode::InvalidConfig, "experiment needs at least one method");
  if (cfg.seeds == 0) throw Error(ErrorCode::InvalidConfig, "experiment needs at least one seed");
  const SamplingScheme scheme = cfg.scheme.value_or(SamplingScheme::single_element(cfg.game->num_components()));
  const ProblemConstants pc = compute_problem_constants(*cfg.game, scheme);

  AggregateTable table;
  for (const MethodSpec& spec : cfg.methods) {
    const StepSizeSchedule schedule = resolve_schedule(spec, pc);
    if (spec.schedule == ScheduleChoice::theory) {
      const BoundSetup b = bound_for(spec, pc);
      check_bound_preconditions(b.kind, b.params);
    }
    const auto traces =
        run_seeds(cfg.game, spec, scheme, schedule, cfg.iterations, cfg.seeds, cfg.base_seed, cfg.threads);
    table.series.push_back(aggregate(spec.display_name(), traces));
  }
  return table;
}

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), result.ptr);
}

namespace {

std::string fixed2(double value) {
  std::array<char, 64> buf{};
  const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::fixed, 2);
  return std::string(buf.data(), result.ptr);
}

double parse_double(std::string_view text, std::size_t line) {
  double value = 0.0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size()) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": bad number '" + std::string(text) + "'");
  }
  return value;
}

std::size_t parse_size(std::string_view text, std::size_t line) {
  std::size_t value = 0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size()) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": bad integer '" + std::string(text) + "'");
  }
  return value;
}

constexpr const char* kCsvHeader = "method,iteration,mean_rel_dist,ci_low,ci_high,seeds";

}  // namespace

std::string table_to_csv(const AggregateTable& table) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& s : table.series) {
    for (const auto& r : s.rows) {
      out += s.method;
      out += ',' + std::to_string(r.iteration);
      out += ',' + format_double(r.mean);
      out += ',' + format_double(r.ci_low);
      out += ',' + format_double(r.ci_high);
      out += ',' + std::to_string(r.seeds);
      out += '\n';
    }
  }
  return out;
}

AggregateTable table_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw Error(ErrorCode::ParseError, "CSV header must be '" + std::string(kCsvHeader) + "'");
  }
  AggregateTable table;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() != 6) throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": need 6 fields");
    const std::string method(fields[0]);
    if (table.series.empty() || table.series.back().method != method) table.series.push_back({method, {}});
    table.series.back().rows.push_back({parse_size(fields[1], line_no), parse_double(fields[2], line_no),
                                        parse_double(fields[3], line_no), parse_double(fields[4], line_no),
                                        parse_size(fields[5], line_no)});
  }
  if (table.series.empty()) throw Error(ErrorCode::ParseError, "CSV has no data rows");
  return table;
}

std::string table_to_svg(const AggregateTable& table, const std::string& title) {
  if (table.series.empty()) throw Error(ErrorCode::InvalidConfig, "nothing to plot");
  constexpr double width = 760.0, height = 460.0;
  constexpr double left = 80.0, right = 170.0, top = 40.0, bottom = 60.0;
  constexpr std::array<const char*, 8> palette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                  "#9467bd", "#8c564b", "#e377c2", "#17becf"};

  double y_min = std::numeric_limits<double>::infinity();
  double y_max = 0.0;
  std::size_t x_max = 1;
  for (const auto& s : table.series) {
    for (const auto& r : s.rows) {
      for (double v : {r.mean, r.ci_low, r.ci_high}) {
        if (v > 0.0 && std::isfinite(v)) {
          y_min = std::min(y_min, v);
          y_max = std::max(y_max, v);
        }
      }
      x_max = std::max(x_max, r.iteration);
    }
  }
  if (!(y_max > 0.0)) {
    y_min = 1e-1;
    y_max = 1.0;
  }
  const double dec_lo = std::floor(std::log10(y_min));
  const double dec_hi = std::max(dec_lo + 1.0, std::ceil(std::log10(y_max)));
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  auto px = [&](double it) { return left + plot_w * it / static_cast<double>(x_max); };
  auto py = [&](double v) {
    const double lv = std::log10(std::max(v, std::pow(10.0, dec_lo)));
    return top + plot_h * (dec_hi - std::min(lv, dec_hi)) / (dec_hi - dec_lo);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty()) {
    svg << "<text x=\"" << fixed2(left) << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\">" << title
        << "</text>\n";
  }
  // Decade grid.
  for (double d = dec_lo; d <= dec_hi; d += 1.0) {
    const std::string y = fixed2(py(std::pow(10.0, d)));
    svg << "<line x1=\"" << fixed2(left) << "\" y1=\"" << y << "\" x2=\"" << fixed2(left + plot_w) << "\" y2=\"" << y
        << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << fixed2(left - 8) << "\" y=\"" << y
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">1e" << static_cast<int>(d)
        << "</text>\n";
  }
  for (int t = 0; t <= 4; ++t) {
    const double it = static_cast<double>(x_max) * t / 4.0;
    svg << "<text x=\"" << fixed2(px(it)) << "\" y=\"" << fixed2(top + plot_h + 18)
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">"
        << static_cast<long long>(std::llround(it)) << "</text>\n";
  }
  svg << "<rect x=\"" << fixed2(left) << "\" y=\"" << fixed2(top) << "\" width=\"" << fixed2(plot_w)
      << "\" height=\"" << fixed2(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << fixed2(left + plot_w / 2) << "\" y=\"" << fixed2(height - 16)
      << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">iteration</text>\n";
  svg << "<text x=\"16\" y=\"" << fixed2(top + plot_h / 2) << "\" font-family=\"sans-serif\" font-size=\"12\""
      << " transform=\"rotate(-90 16 " << fixed2(top + plot_h / 2)
      << ")\" text-anchor=\"middle\">relative squared distance</text>\n";

  for (std::size_t m = 0; m < table.series.size(); ++m) {
    const auto& s = table.series[m];
    const char* color = palette[m % palette.size()];
    const std::size_t stride = std::max<std::size_t>(1, s.rows.size() / 1500);
    std::vector<const AggregateRow*> picked;
    for (std::size_t k = 0; k < s.rows.size(); k += stride) picked.push_back(&s.rows[k]);
    if (!s.rows.empty() && picked.back() != &s.rows.back()) picked.push_back(&s.rows.back());

    svg << "<polygon fill=\"" << color << "\" fill-opacity=\"0.18\" stroke=\"none\" points=\"";
    for (const AggregateRow* r : picked) svg << fixed2(px(r->iteration)) << ',' << fixed2(py(r->ci_high)) << ' ';
    for (auto it = picked.rbegin(); it != picked.rend(); ++it) {
      svg << fixed2(px((*it)->iteration)) << ',' << fixed2(py((*it)->ci_low)) << ' ';
    }
    svg << "\"/>\n";
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\" points=\"";
    for (const AggregateRow* r : picked) svg << fixed2(px(r->iteration)) << ',' << fixed2(py(r->mean)) << ' ';
    svg << "\"/>\n";
    const double ly = top + 16.0 + 20.0 * static_cast<double>(m);
    svg << "<line x1=\"" << fixed2(left + plot_w + 12) << "\" y1=\"" << fixed2(ly) << "\" x2=\""
        << fixed2(left + plot_w + 36) << "\" y2=\"" << fixed2(ly) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << fixed2(left + plot_w + 42) << "\" y=\"" << fixed2(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.method << "</text>\n";
  }
  svg << "<text x=\"" << fixed2(left + plot_w + 12) << "\" y=\"" << fixed2(top + plot_h)
      << "\" font-family=\"sans-serif\" font-size=\"10\">band: mean +/- 1.96 sd/sqrt(seeds)</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write to " + path.string() + " failed");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit_outputs(const AggregateTable& table, const std::filesystem::path& csv_path,
                  const std::filesystem::path& svg_path) {
  if (table.series.empty()) throw Error(ErrorCode::InvalidConfig, "nothing to emit");
  write_text(csv_path, table_to_csv(table));
  write_text(svg_path, table_to_svg(table));
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  if (!cfg.game) throw Error(ErrorCode::InvalidConfig, "sweep needs a game");
  if (cfg.multipliers.empty()) throw Error(ErrorCode::InvalidConfig, "sweep needs at least one multiplier");
  const SamplingScheme scheme = cfg.scheme.value_or(SamplingScheme::single_element(cfg.game->num_components()));
  const ProblemConstants pc = compute_problem_constants(*cfg.game, scheme);
  MethodSpec theory;
  theory.method = cfg.method;
  const StepSizes base = resolve_schedule(theory, pc).at(0);

  std::vector<SweepRow> rows;
  for (double mult : cfg.multipliers) {
    if (!(mult > 0.0)) throw Error(ErrorCode::InvalidRange, "multipliers must be positive");
    SweepRow row;
    row.multiplier = mult;
    row.alpha = cfg.target == SweepTarget::gamma ? base.alpha : mult * base.alpha;
    row.gamma = cfg.target == SweepTarget::alpha ? base.gamma : mult * base.gamma;
    MethodSpec spec;
    spec.method = cfg.method;
    spec.schedule = ScheduleChoice::fixed;
    const auto traces = run_seeds(cfg.game, spec, scheme, StepSizeSchedule::constant(row.alpha, row.gamma),
                                  cfg.iterations, cfg.seeds, cfg.base_seed, cfg.threads);
    double sum = 0.0;
    std::size_t kept = 0;
    for (const auto& t : traces) {
      if (t.diverged) {
        ++row.diverged;
        continue;
      }
      sum += t.dist_sq.back() / t.dist_sq.front();
      ++kept;
    }
    row.final_mean = kept > 0 ? sum / static_cast<double>(kept) : std::numeric_limits<double>::infinity();
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_to_csv(Method method, const std::vector<SweepRow>& rows) {
  std::string out = "method,multiplier,alpha,gamma,final_mean_rel_dist,diverged_seeds\n";
  for (const auto& r : rows) {
    out += std::string(to_string(method)) + ',' + format_double(r.multiplier) + ',' + format_double(r.alpha) + ',' +
           format_double(r.gamma) + ',' + format_double(r.final_mean) + ',' + std::to_string(r.diverged) + '\n';
  }
  return out;
}

}  // namespace svi
