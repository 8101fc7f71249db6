// Command-line front end: generate games, print constants, run solvers,
// verify assumptions, sweep step sizes and plot CSV tables.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "svi/constants.hpp"
#include "svi/error.hpp"
#include "svi/experiments.hpp"
#include "svi/game_file.hpp"
#include "svi/report.hpp"
#include "svi/verify.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct Globals {
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::size_t threads = 1;

  std::size_t worker_count() const {
    if (threads > 0) return threads;
    return std::max(1u, std::thread::hardware_concurrency());
  }

  fs::path out(const std::string& name) const {
    const fs::path p(name);
    return p.is_absolute() ? p : fs::path(out_dir) / p;
  }
};

struct SchemeArgs {
  std::string name = "single";
  std::size_t b = 0;

  svi::SamplingScheme make(std::size_t n) const {
    return svi::parse_scheme(name, n, b > 0 ? std::optional<std::size_t>(b) : std::nullopt);
  }
};

void add_scheme_options(CLI::App* cmd, SchemeArgs& args) {
  cmd->add_option("--scheme", args.name, "single, full or minibatch")->capture_default_str();
  cmd->add_option("--b", args.b, "minibatch size");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_numbers(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw svi::Error(svi::ErrorCode::InvalidConfig, "not a number: '" + item + "'");
    }
  }
  return out;
}

// generate

struct GenerateArgs {
  svi::GameGenConfig cfg;
  double target_kappa = 0.0;
  SchemeArgs scheme;
  std::string out = "game.json";
};

int cmd_generate(const Globals& g, GenerateArgs args) {
  args.cfg.seed = g.seed;
  if (args.target_kappa > 0.0) {
    args.cfg = svi::tune_to_condition_number(args.cfg, args.target_kappa, args.scheme.name,
                                             args.scheme.b > 0 ? std::optional<std::size_t>(args.scheme.b)
                                                               : std::nullopt);
  }
  const svi::QuadraticGame game = svi::generate_game(args.cfg);
  const fs::path path = g.out(args.out);
  svi::write_game(path, game, args.cfg);
  std::cout << "wrote " << path.string() << "  n=" << args.cfg.n << " d1=" << args.cfg.d1 << " d2=" << args.cfg.d2
            << " L_B=" << svi::format_double(args.cfg.L_B) << '\n';
  try {
    const auto pc = svi::compute_problem_constants(game, args.scheme.make(game.num_components()));
    std::cout << "kappa_G: " << svi::format_double(*pc.game.kappa_G) << '\n';
  } catch (const svi::Error& e) {
    std::cout << "constants unavailable: " << e.what() << '\n';
  }
  return kExitOk;
}

// constants

struct ConstantsArgs {
  std::string game;
  SchemeArgs scheme;
  double epsilon = 0.0;
  bool json = false;
};

int cmd_constants(const Globals&, const ConstantsArgs& args) {
  const auto doc = svi::read_game(args.game);
  const svi::SamplingScheme scheme = args.scheme.make(doc.game->num_components());
  const auto pc = svi::compute_problem_constants(*doc.game, scheme);
  const auto flat = svi::constants_document(
      pc, scheme, args.epsilon > 0.0 ? std::optional<double>(args.epsilon) : std::nullopt);
  std::cout << (args.json ? flat.dump(2) + "\n" : svi::key_value_text(flat));
  return kExitOk;
}

// run

struct RunArgs {
  std::string game;
  std::string methods = "sgda";
  SchemeArgs scheme;
  std::string schedule = "constant";
  double alpha = -1.0;
  double gamma = -1.0;
  std::size_t iters = 1000;
  std::size_t seeds = 5;
  std::string out = "run.csv";
  std::string svg;
  bool dump_iterates = false;
};

svi::MethodSpec method_spec(const std::string& name, const RunArgs& args) {
  svi::MethodSpec spec;
  spec.method = svi::parse_method(name);
  if (args.schedule == "switching") {
    spec.schedule = svi::ScheduleChoice::switching;
  } else if (args.schedule == "constant" || args.schedule == "theory") {
    if (args.alpha >= 0.0 || args.gamma >= 0.0) {
      spec.schedule = svi::ScheduleChoice::fixed;
      spec.alpha = std::max(0.0, args.alpha);
      spec.gamma = std::max(0.0, args.gamma);
    }
  } else {
    throw svi::Error(svi::ErrorCode::InvalidConfig, "unknown schedule '" + args.schedule + "'");
  }
  return spec;
}

std::string iterates_csv(const std::string& method, const std::vector<svi::RunTrace>& traces) {
  std::string out = "method,seed,iteration";
  const auto d = traces.front().iterates.empty() ? 0 : traces.front().iterates.front().size();
  for (Eigen::Index k = 0; k < d; ++k) out += ",x" + std::to_string(k);
  out += '\n';
  for (const auto& t : traces) {
    for (std::size_t k = 0; k < t.iterates.size(); ++k) {
      out += method + ',' + std::to_string(t.seed) + ',' + std::to_string(k);
      for (Eigen::Index c = 0; c < t.iterates[k].size(); ++c) out += ',' + svi::format_double(t.iterates[k](c));
      out += '\n';
    }
  }
  return out;
}

int cmd_run(const Globals& g, const RunArgs& args) {
  const auto doc = svi::read_game(args.game);
  const svi::SamplingScheme scheme = args.scheme.make(doc.game->num_components());
  const auto pc = svi::compute_problem_constants(*doc.game, scheme);
  const auto names = split_list(args.methods);
  if (names.empty()) throw svi::Error(svi::ErrorCode::InvalidConfig, "no methods given");

  svi::AggregateTable table;
  std::string dump;
  for (const auto& name : names) {
    const svi::MethodSpec spec = method_spec(name, args);
    const svi::StepSizeSchedule schedule = svi::resolve_schedule(spec, pc);
    const auto traces = svi::run_seeds(doc.game, spec, scheme, schedule, args.iters, args.seeds, g.seed,
                                       g.worker_count(), args.dump_iterates);
    std::size_t diverged = 0;
    for (const auto& t : traces) diverged += t.diverged ? 1 : 0;
    table.series.push_back(svi::aggregate(spec.display_name(), traces));
    const auto& last = table.series.back().rows.back();
    svi::StepSizes s0 = schedule.at(0);
    if (!svi::uses_hamiltonian(spec.method)) s0.gamma = 0.0;
    if (spec.method == svi::Method::shgd) s0.alpha = 0.0;
    std::cout << spec.display_name() << ": alpha_0=" << svi::format_double(s0.alpha)
              << " gamma_0=" << svi::format_double(s0.gamma) << " final mean_rel_dist="
              << svi::format_double(last.mean) << " (k=" << last.iteration << ")";
    if (diverged > 0) std::cout << " diverged_seeds=" << diverged;
    std::cout << '\n';
    if (args.dump_iterates) {
      const std::string block = iterates_csv(spec.display_name(), traces);
      dump += dump.empty() ? block : block.substr(block.find('\n') + 1);
    }
  }
  const fs::path csv = g.out(args.out);
  const fs::path svg = args.svg.empty() ? fs::path(csv).replace_extension(".svg") : g.out(args.svg);
  svi::emit_outputs(table, csv, svg);
  std::cout << "wrote " << csv.string() << " and " << svg.string() << '\n';
  if (args.dump_iterates) {
    const fs::path it = fs::path(csv).replace_extension(".iterates.csv");
    svi::write_text(it, dump);
    std::cout << "wrote " << it.string() << '\n';
  }
  return kExitOk;
}

// verify

struct VerifyArgs {
  std::string game;
  SchemeArgs scheme;
  std::string checks = "ec,class,unbiased";
  std::size_t points = 200;
  std::size_t seeds = 30;
  std::size_t iters = 1000;
  std::string json;
};

int cmd_verify(const Globals& g, const VerifyArgs& args) {
  const auto doc = svi::read_game(args.game);
  const svi::QuadraticGame& game = *doc.game;
  const svi::SamplingScheme scheme = args.scheme.make(game.num_components());
  const auto pc = svi::compute_problem_constants(game, scheme);
  svi::Rng rng(g.seed);

  svi::CheckReport all;
  all.name = "verify";
  for (const auto& check : split_list(args.checks)) {
    if (check == "ec") {
      all.subreports.push_back(svi::check_ec(game, scheme, pc.ec.ell_xi, args.points, svi::kDefaultRadius, rng));
    } else if (check == "class") {
      // Strong monotonicity with modulus mu gives co-coercivity around x* with ell.
      all.subreports.push_back(
          svi::check_monotonicity_class(game, pc.game.mu, pc.game.ell, args.points, svi::kDefaultRadius, rng));
    } else if (check == "unbiased") {
      all.subreports.push_back(svi::check_unbiasedness(game, scheme, args.points, rng));
    } else if (check == "envelope") {
      svi::MethodSpec spec;
      spec.method = svi::Method::sgda;
      const auto traces = svi::run_seeds(doc.game, spec, scheme, svi::resolve_schedule(spec, pc), args.iters,
                                         args.seeds, g.seed, g.worker_count());
      const auto bound = svi::bound_for(spec, pc);
      all.subreports.push_back(svi::check_bound_envelope(traces, bound.kind, bound.params, 1.05));
    } else {
      throw svi::Error(svi::ErrorCode::InvalidConfig, "unknown check '" + check + "'");
    }
  }
  all.count = all.subreports.size();
  all.finalize();
  std::cout << svi::report_text(all);
  if (!args.json.empty()) {
    const fs::path path = g.out(args.json);
    svi::write_text(path, svi::report_json(all).dump(2) + "\n");
    std::cout << "wrote " << path.string() << '\n';
  }
  return all.passed ? kExitOk : kExitCheckFailed;
}

// sweep

struct SweepArgs {
  std::string game;
  std::string method = "sgda";
  SchemeArgs scheme;
  std::string multipliers = "0.25,0.5,1,2,4";
  std::string vary = "both";
  std::size_t iters = 1000;
  std::size_t seeds = 5;
  double target_kappa = 0.0;
  svi::GameGenConfig cfg;
  std::string out = "sweep.csv";
};

int cmd_sweep(const Globals& g, SweepArgs args) {
  svi::SweepConfig sc;
  if (!args.game.empty()) {
    sc.game = svi::read_game(args.game).game;
  } else if (args.target_kappa > 0.0) {
    args.cfg.seed = g.seed;
    const svi::GameGenConfig tuned = svi::tune_to_condition_number(
        args.cfg, args.target_kappa, args.scheme.name,
        args.scheme.b > 0 ? std::optional<std::size_t>(args.scheme.b) : std::nullopt);
    auto game = std::make_shared<const svi::QuadraticGame>(svi::generate_game(tuned));
    const fs::path path = g.out("game_kappa_" + svi::format_double(args.target_kappa) + ".json");
    svi::write_game(path, *game, tuned);
    std::cout << "tuned L_B=" << svi::format_double(tuned.L_B) << ", wrote " << path.string() << '\n';
    sc.game = std::move(game);
  } else {
    throw svi::Error(svi::ErrorCode::InvalidConfig, "sweep needs --game or --target-kappa");
  }
  sc.method = svi::parse_method(args.method);
  sc.scheme = args.scheme.make(sc.game->num_components());
  sc.multipliers = parse_numbers(args.multipliers);
  if (args.vary == "alpha") {
    sc.target = svi::SweepTarget::alpha;
  } else if (args.vary == "gamma") {
    sc.target = svi::SweepTarget::gamma;
  } else if (args.vary == "both") {
    sc.target = svi::SweepTarget::both;
  } else {
    throw svi::Error(svi::ErrorCode::InvalidConfig, "--vary takes alpha, gamma or both");
  }
  sc.iterations = args.iters;
  sc.seeds = args.seeds;
  sc.base_seed = g.seed;
  sc.threads = g.worker_count();
  const auto rows = svi::run_sweep(sc);
  const std::string csv = svi::sweep_to_csv(sc.method, rows);
  std::cout << csv;
  const fs::path path = g.out(args.out);
  svi::write_text(path, csv);
  std::cout << "wrote " << path.string() << '\n';
  return kExitOk;
}

// plot

struct PlotArgs {
  std::string csv;
  std::string out;
  std::string title;
};

int cmd_plot(const Globals& g, const PlotArgs& args) {
  const svi::AggregateTable table = svi::table_from_csv(svi::read_text(args.csv));
  const fs::path path = args.out.empty() ? fs::path(args.csv).replace_extension(".svg") : g.out(args.out);
  svi::write_text(path, svi::table_to_svg(table, args.title));
  std::cout << "wrote " << path.string() << '\n';
  return kExitOk;
}

void add_generator_options(CLI::App* cmd, svi::GameGenConfig& cfg) {
  cmd->add_option("--n", cfg.n, "number of components")->capture_default_str();
  cmd->add_option("--d1", cfg.d1, "dimension of the min player")->capture_default_str();
  cmd->add_option("--d2", cfg.d2, "dimension of the max player")->capture_default_str();
  cmd->add_option("--mu-a", cfg.mu_A)->capture_default_str();
  cmd->add_option("--L-a", cfg.L_A)->capture_default_str();
  cmd->add_option("--mu-c", cfg.mu_C)->capture_default_str();
  cmd->add_option("--L-c", cfg.L_C)->capture_default_str();
  cmd->add_option("--mu-b", cfg.mu_B)->capture_default_str();
  cmd->add_option("--L-b", cfg.L_B)->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic variational inequality solvers for min-max games"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "base random seed")->capture_default_str();
  app.add_option("--out-dir", g.out_dir, "directory for output files")->capture_default_str();
  app.add_option("--threads", g.threads, "worker threads, 0 for all cores")->capture_default_str();

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "sample a quadratic game and write it as JSON");
  add_generator_options(generate, gen.cfg);
  generate->add_option("--target-kappa", gen.target_kappa, "scale B to hit this kappa_G within 10%");
  add_scheme_options(generate, gen.scheme);
  generate->add_option("--out", gen.out, "output file")->capture_default_str();

  ConstantsArgs cons;
  auto* constants = app.add_subcommand("constants", "print every theory constant for a game and scheme");
  constants->add_option("game", cons.game, "game file")->required();
  add_scheme_options(constants, cons.scheme);
  constants->add_option("--epsilon", cons.epsilon, "target accuracy for the optimal minibatch size");
  constants->add_flag("--json", cons.json, "print JSON instead of key: value lines");

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "run solvers over several seeds and write CSV + SVG");
  run_cmd->add_option("--game", run.game, "game file")->required();
  run_cmd->add_option("--method", run.methods, "comma-separated: sgda,shgd,sco,gda,co")->capture_default_str();
  add_scheme_options(run_cmd, run.scheme);
  run_cmd->add_option("--schedule", run.schedule, "constant or switching")->capture_default_str();
  run_cmd->add_option("--alpha", run.alpha, "fixed alpha (default: theory value)");
  run_cmd->add_option("--gamma", run.gamma, "fixed gamma (default: theory value)");
  run_cmd->add_option("--iters", run.iters)->capture_default_str();
  run_cmd->add_option("--seeds", run.seeds)->capture_default_str();
  run_cmd->add_option("--out", run.out, "CSV file")->capture_default_str();
  run_cmd->add_option("--svg", run.svg, "SVG file (default: CSV name with .svg)");
  run_cmd->add_flag("--dump-iterates", run.dump_iterates, "also write every iterate");

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "check assumptions and bounds on a game");
  verify->add_option("game", ver.game, "game file")->required();
  add_scheme_options(verify, ver.scheme);
  verify->add_option("--checks", ver.checks, "comma-separated: ec,class,unbiased,envelope")->capture_default_str();
  verify->add_option("--points", ver.points)->capture_default_str();
  verify->add_option("--seeds", ver.seeds, "seeds for the envelope check")->capture_default_str();
  verify->add_option("--iters", ver.iters, "iterations for the envelope check")->capture_default_str();
  verify->add_option("--json", ver.json, "also write a JSON report");

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "final accuracy over multiples of the theory step size");
  sweep->add_option("--game", sw.game, "game file");
  sweep->add_option("--method", sw.method)->capture_default_str();
  add_scheme_options(sweep, sw.scheme);
  sweep->add_option("--multipliers", sw.multipliers)->capture_default_str();
  sweep->add_option("--vary", sw.vary, "alpha, gamma or both")->capture_default_str();
  sweep->add_option("--iters", sw.iters)->capture_default_str();
  sweep->add_option("--seeds", sw.seeds)->capture_default_str();
  sweep->add_option("--target-kappa", sw.target_kappa, "generate a game tuned to this kappa_G instead of --game");
  add_generator_options(sweep, sw.cfg);
  sweep->add_option("--out", sw.out)->capture_default_str();

  PlotArgs pl;
  auto* plot = app.add_subcommand("plot", "render a run CSV as SVG");
  plot->add_option("csv", pl.csv, "CSV written by run")->required();
  plot->add_option("--out", pl.out, "SVG file");
  plot->add_option("--title", pl.title);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*generate) return cmd_generate(g, gen);
    if (*constants) return cmd_constants(g, cons);
    if (*run_cmd) return cmd_run(g, run);
    if (*verify) return cmd_verify(g, ver);
    if (*sweep) return cmd_sweep(g, sw);
    if (*plot) return cmd_plot(g, pl);
  } catch (const svi::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return svi::exit_status(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitConfig;
}
