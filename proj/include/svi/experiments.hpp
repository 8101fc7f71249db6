#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "svi/constants.hpp"
#include "svi/operators.hpp"
#include "svi/sampling.hpp"
#include "svi/solvers.hpp"

namespace svi {

struct GameGenConfig {
  std::size_t n = 20;
  std::size_t d1 = 20;
  std::size_t d2 = 20;
  double mu_A = 1.0;
  double L_A = 3.0;
  double mu_C = 1.0;
  double L_C = 3.0;
  double mu_B = 0.0;
  double L_B = 1.0;
  std::uint64_t seed = 0;
};

/// Throws InvalidRange unless 0 < mu_A <= L_A, 0 < mu_C <= L_C, 0 <= mu_B <= L_B and n, d1, d2 >= 1.
void validate(const GameGenConfig& cfg);

/// A_i = Q D Q' with eigenvalues uniform in [mu_A, L_A] (likewise C_i),
/// B_i = U S V' with singular values uniform in [mu_B, L_B], a_i, c_i
/// standard normal. Component 0 carries the smallest eigenvalues mu_A, mu_C
/// and component n-1 the largest L_A, L_C.
QuadraticGame generate_game(const GameGenConfig& cfg, Rng& rng);
/// Uses an Rng seeded with cfg.seed.
QuadraticGame generate_game(const GameGenConfig& cfg);

/// Everything the bounds and theory step sizes need for one (game, scheme).
struct ProblemConstants {
  GameConstants game;
  ECConstants ec;
  /// Present for single-element and full-batch schemes.
  std::optional<HamiltonianConstants> hamiltonian;
  /// Full-batch Hamiltonian constants (mu_H, L_H) for the deterministic methods.
  HamiltonianConstants hamiltonian_full;
};

ProblemConstants compute_problem_constants(const QuadraticGame& game, const SamplingScheme& scheme);

/// Scales (mu_B, L_B) so that kappa_G of the generated game under `scheme_name`
/// sampling lands within 10% of target. Throws InvalidRange when the target
/// sits below the value at B = 0 or cannot be reached.
GameGenConfig tune_to_condition_number(GameGenConfig cfg, double target_kappa, const std::string& scheme_name,
                                       std::optional<std::size_t> batch = std::nullopt);

enum class ScheduleChoice { theory, switching, fixed };

struct MethodSpec {
  Method method = Method::sgda;
  ScheduleChoice schedule = ScheduleChoice::theory;
  double alpha = 0.0;  // fixed only
  double gamma = 0.0;  // fixed only
  std::string label;   // defaults to "<method>" or "<method>-switching"

  std::string display_name() const;
};

/// Theory step sizes: sgda 1/(2 ell_xi); sco 1/(4 ell_xi), 1/(4 calL_H);
/// shgd 1/(2 calL_H); gda 1/(2 ell); co 1/(4 ell), 1/(4 L_H).
StepSizeSchedule resolve_schedule(const MethodSpec& spec, const ProblemConstants& pc);

/// The bound matching a method and schedule, with its parameters filled in.
struct BoundSetup {
  BoundKind kind;
  BoundParams params;
};
BoundSetup bound_for(const MethodSpec& spec, const ProblemConstants& pc);

/// Seeds base_seed, base_seed + 1, ..., shared across methods.
std::vector<RunTrace> run_seeds(const std::shared_ptr<const QuadraticGame>& game, const MethodSpec& spec,
                                const SamplingScheme& scheme, const StepSizeSchedule& schedule,
                                std::size_t iterations, std::size_t seeds, std::uint64_t base_seed,
                                std::size_t threads, bool record_iterates = false);

struct AggregateRow {
  std::size_t iteration = 0;
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t seeds = 0;
};

struct MethodSeries {
  std::string method;
  std::vector<AggregateRow> rows;
};

struct AggregateTable {
  std::vector<MethodSeries> series;
};

/// Mean of |x^k - x*|^2 / |x^0 - x*|^2 with a 95% normal-approximation band.
MethodSeries aggregate(const std::string& method, const std::vector<RunTrace>& traces);

struct ExperimentConfig {
  std::shared_ptr<const QuadraticGame> game;
  std::vector<MethodSpec> methods;
  std::optional<SamplingScheme> scheme;
  std::size_t iterations = 1000;
  std::size_t seeds = 5;
  std::uint64_t base_seed = 0;
  std::size_t threads = 1;
};

AggregateTable run_experiment(const ExperimentConfig& cfg);

/// Header method,iteration,mean_rel_dist,ci_low,ci_high,seeds.
std::string table_to_csv(const AggregateTable& table);
AggregateTable table_from_csv(const std::string& text);
/// Log-scale line chart, one line and CI band per method.
std::string table_to_svg(const AggregateTable& table, const std::string& title = "");

/// Writes text to path. Throws IoError.
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

void emit_outputs(const AggregateTable& table, const std::filesystem::path& csv_path,
                  const std::filesystem::path& svg_path);

enum class SweepTarget { alpha, gamma, both };

struct SweepConfig {
  std::shared_ptr<const QuadraticGame> game;
  Method method = Method::sgda;
  std::optional<SamplingScheme> scheme;
  std::vector<double> multipliers;
  SweepTarget target = SweepTarget::both;
  std::size_t iterations = 1000;
  std::size_t seeds = 5;
  std::uint64_t base_seed = 0;
  std::size_t threads = 1;
};

struct SweepRow {
  double multiplier = 1.0;
  double alpha = 0.0;
  double gamma = 0.0;
  double final_mean = 0.0;   // mean relative distance at the last iteration
  std::size_t diverged = 0;  // seeds flagged as diverged
};

/// Runs the method with (multiplier x theory) step sizes.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg);
std::string sweep_to_csv(Method method, const std::vector<SweepRow>& rows);

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

}  // namespace svi
