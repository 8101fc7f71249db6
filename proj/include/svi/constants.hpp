#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "svi/numerics.hpp"
#include "svi/operators.hpp"
#include "svi/sampling.hpp"

namespace svi {

/// Routes to the co-coercivity constant ell = sup_{|x|=1} |Mx|^2 / <x, Mx> of x -> Mx.
enum class CocoercivityMethod {
  /// 1 / min over nonzero eigenvalues of Re(1/lambda). Exact only for normal
  /// matrices; a lower bound on ell otherwise.
  spectral,
  /// Largest generalized eigenvalue of (M'M, sym(M)) on the range of sym(M).
  exact,
  /// Brute-force maximization over random unit vectors plus local refinement
  /// (dimension <= 6). Test oracle.
  grid_oracle,
};

struct GridOracleOptions {
  std::size_t samples = 100'000;
  std::uint64_t seed = 0x5eed;
};

/// Throws NotCocoercive when <x, Mx> <= 0 for some x outside null(M).
double matrix_cocoercivity(const Matrix& m, CocoercivityMethod method, const GridOracleOptions& grid = {});

struct GameConstants {
  double mu = 0.0;                  // quasi-strong monotonicity modulus
  std::vector<double> ell_i;        // per-component co-coercivity
  double ell = 0.0;                 // co-coercivity of the mean operator
  double ell_max = 0.0;
  double sigma1_sq = 0.0;           // (1/n) sum_i |xi_i(x*)|^2
  std::optional<double> kappa_G;    // ell_xi / mu once a scheme is fixed
  Vector solution;                  // x*
  std::vector<Vector> values_at_solution;  // xi_i(x*)

  std::size_t n() const noexcept { return ell_i.size(); }
};

/// mu = lambda_min(blkdiag(A, C)); ell_i and ell by the chosen co-coercivity
/// route. Throws Singular, NotStronglyMonotone, NotCocoercive.
GameConstants game_constants(const QuadraticGame& game, CocoercivityMethod method = CocoercivityMethod::exact);

struct ECConstants {
  double ell_xi = 0.0;
  double sigma_sq = 0.0;
};

/// Expected co-coercivity constant and operator noise at x* for a scheme.
ECConstants ec_constants(const GameConstants& gc, const SamplingScheme& scheme);

/// Returns gc with kappa_G = ell_xi / mu filled in.
GameConstants with_condition_number(GameConstants gc, const ECConstants& ec);

struct HamiltonianConstants {
  double mu_H = 0.0;
  double L_H = 0.0;
  double calL_H = 0.0;      // expected smoothness
  double sigma_H_sq = 0.0;  // E |grad H_{u,v}(x*)|^2
};

/// Supports single-element and full-batch schemes; throws UnsupportedScheme otherwise.
HamiltonianConstants hamiltonian_constants(const QuadraticGame& game, const SamplingScheme& scheme);

struct OptimalMinibatch {
  double b_star_real = 1.0;
  std::size_t b_star = 1;
};

/// Total complexity (2/mu) max{b ell_xi(b), b 2 sigma^2(b) / (eps mu)} for b-minibatch sampling.
double minibatch_total_complexity(const GameConstants& gc, std::size_t b, double epsilon);

OptimalMinibatch optimal_minibatch(const GameConstants& gc, double epsilon);

enum class BoundKind {
  sgda_constant,             // alpha <= 1/(2 ell_xi)
  sgda_constant_large_step,  // alpha < 1/ell_xi
  sgda_switching,
  sco_constant,              // alpha <= 1/(4 ell_xi), gamma <= 1/(4 calL_H)
  shgd_constant,             // alpha = 0, gamma <= 1/(2 calL_H)
  sco_switching,
};

const char* to_string(BoundKind kind) noexcept;

/// Inputs of the bound formulas. Deterministic corollaries use ell for ell_xi,
/// L_H for calL_H and zero noise.
struct BoundParams {
  double mu = 0.0;
  double ell_xi = 0.0;
  double sigma_sq = 0.0;
  double mu_H = 0.0;
  double calL_H = 0.0;
  double sigma_H_sq = 0.0;
  double alpha = 0.0;
  double gamma = 0.0;
};

/// 4 ceil(ell_xi / mu).
std::size_t sgda_switch_point(double ell_xi, double mu);
/// k* = 8 max{ell_xi, calL_H} / (mu_H + mu).
double sco_switch_threshold(double ell_xi, double calL_H, double mu, double mu_H);
/// ceil(k*).
std::size_t sco_switch_point(double ell_xi, double calL_H, double mu, double mu_H);

/// First iteration at which a bound applies (0 for constant-step bounds).
std::size_t bound_start(BoundKind kind, const BoundParams& p);

/// Throws StepSizeOutOfRange when the step sizes violate the bound's range.
void check_bound_preconditions(BoundKind kind, const BoundParams& p);

/// Upper bound on E|x^k - x*|^2. Throws StepSizeOutOfRange or SwitchNotReached.
double theoretical_bound(BoundKind kind, const BoundParams& p, std::size_t k, double r0_sq);

}  // namespace svi
