#include "svi/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "svi/error.hpp"

namespace svi {

namespace {

constexpr double kReTolerance = 1e-12;
constexpr double kStepSlack = 1e-12;

void require_square(const Matrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::NonSquare, "co-coercivity needs a square matrix");
}

double cocoercivity_spectral(const Matrix& m) {
  const double scale = m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  double min_re = std::numeric_limits<double>::infinity();
  for (const Complex& lambda : general_spectrum(m)) {
    if (std::abs(lambda) <= 1e-12 * scale) continue;
    min_re = std::min(min_re, (1.0 / lambda).real());
  }
  if (min_re == std::numeric_limits<double>::infinity()) return 0.0;
  if (min_re * scale <= kReTolerance) {
    throw Error(ErrorCode::NotCocoercive, "an eigenvalue has Re(1/lambda) <= 0");
  }
  return 1.0 / min_re;
}

double cocoercivity_exact(const Matrix& m) {
  const double scale = m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  const Matrix s = symmetric_part(m);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(s);
  if (eig.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "symmetric eigensolver failed");
  const Vector& lambda = eig.eigenvalues();
  const Matrix& p = eig.eigenvectors();
  const double tol = 1e-12 * std::max(scale, lambda.cwiseAbs().maxCoeff());
  if (lambda(0) < -tol) throw Error(ErrorCode::NotCocoercive, "<x, Mx> takes negative values");

  std::vector<Eigen::Index> range;
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    if (lambda(k) > tol) {
      range.push_back(k);
    } else if ((m * p.col(k)).norm() > 1e-9 * scale) {
      // <x, Mx> = 0 but Mx != 0: the ratio is unbounded.
      throw Error(ErrorCode::NotCocoercive, "<x, Mx> vanishes outside the null space of M");
    }
  }
  if (range.empty()) return 0.0;

  // On range(S) write x = W y with W = P Lambda^{-1/2}, so <x, Mx> = |y|^2.
  Matrix w(m.rows(), static_cast<Eigen::Index>(range.size()));
  for (std::size_t c = 0; c < range.size(); ++c) {
    w.col(static_cast<Eigen::Index>(c)) = p.col(range[c]) / std::sqrt(lambda(range[c]));
  }
  const Matrix mw = m * w;
  const Matrix gram = mw.transpose() * mw;
  return symmetric_eigenvalues(0.5 * (gram + gram.transpose())).back();
}

double cocoercivity_grid(const Matrix& m, const GridOracleOptions& options) {
  const auto d = static_cast<std::size_t>(m.rows());
  if (d > 6) throw Error(ErrorCode::Unsupported, "grid oracle is limited to dimension 6");
  const double scale = m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;

  Rng rng(options.seed);
  auto ratio = [&](const Vector& x) {
    const Vector mx = m * x;
    const double num = mx.squaredNorm();
    const double den = x.dot(mx);
    if (den <= 1e-12 * scale && num > 1e-16 * scale * scale) {
      throw Error(ErrorCode::NotCocoercive, "found <x, Mx> <= 0 with Mx != 0");
    }
    return num == 0.0 ? 0.0 : num / den;
  };

  Vector best = Vector::Zero(static_cast<Eigen::Index>(d));
  double best_value = -1.0;
  for (std::size_t s = 0; s < options.samples; ++s) {
    Vector x = rng.normal_vector(d);
    const double norm = x.norm();
    if (norm == 0.0) continue;
    x /= norm;
    const double value = ratio(x);
    if (value > best_value) {
      best_value = value;
      best = x;
    }
  }

  // Random local search with a shrinking radius.
  for (double radius = 0.1; radius > 1e-9; radius *= 0.5) {
    for (int trial = 0; trial < 200; ++trial) {
      Vector x = best + radius * rng.normal_vector(d);
      x.normalize();
      const double value = ratio(x);
      if (value > best_value) {
        best_value = value;
        best = x;
      }
    }
  }
  return best_value;
}

bool is_uniform_subset(const SamplingScheme& scheme) {
  return scheme.kind() == SchemeKind::minibatch || scheme.kind() == SchemeKind::single_element;
}

double pow_k(double base, std::size_t k) { return std::pow(base, static_cast<double>(k)); }

void require_positive(double value, const char* name) {
  if (!(value > 0.0)) throw Error(ErrorCode::InvalidRange, std::string(name) + " must be positive");
}

void require_step(double step, double limit, bool strict, const char* name) {
  const bool ok = strict ? step < limit : step <= limit * (1.0 + kStepSlack);
  if (!(step >= 0.0) || !ok) {
    throw Error(ErrorCode::StepSizeOutOfRange, std::string(name) + " = " + std::to_string(step) +
                                                   (strict ? " must be below " : " exceeds ") +
                                                   std::to_string(limit));
  }
}

}  // namespace

double matrix_cocoercivity(const Matrix& m, CocoercivityMethod method, const GridOracleOptions& grid) {
  require_square(m);
  switch (method) {
    case CocoercivityMethod::spectral: return cocoercivity_spectral(m);
    case CocoercivityMethod::exact: return cocoercivity_exact(m);
    case CocoercivityMethod::grid_oracle: return cocoercivity_grid(m, grid);
  }
  throw Error(ErrorCode::InvalidConfig, "unknown co-coercivity method");
}

GameConstants game_constants(const QuadraticGame& game, CocoercivityMethod method) {
  GameConstants gc;
  gc.solution = game.equilibrium();

  const Matrix& j = game.mean_jacobian();
  gc.mu = symmetric_eigenvalues(symmetric_part(j)).front();
  if (!(gc.mu > 0.0)) {
    throw Error(ErrorCode::NotStronglyMonotone, "lambda_min of the symmetric Jacobian is " + std::to_string(gc.mu));
  }

  const std::size_t n = game.num_components();
  gc.ell_i.reserve(n);
  gc.values_at_solution.reserve(n);
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    gc.ell_i.push_back(matrix_cocoercivity(game.jacobian(i), method));
    gc.values_at_solution.push_back(game.component_value(i, gc.solution));
    sum_sq += gc.values_at_solution.back().squaredNorm();
  }
  gc.ell = matrix_cocoercivity(j, method);
  gc.ell_max = *std::max_element(gc.ell_i.begin(), gc.ell_i.end());
  gc.sigma1_sq = sum_sq / static_cast<double>(n);
  return gc;
}

ECConstants ec_constants(const GameConstants& gc, const SamplingScheme& scheme) {
  if (scheme.n() != gc.n()) {
    throw Error(ErrorCode::DimensionMismatch, "scheme has n=" + std::to_string(scheme.n()) + ", game has n=" +
                                                  std::to_string(gc.n()));
  }
  const std::size_t n = gc.n();
  const double nd = static_cast<double>(n);
  if (scheme.kind() == SchemeKind::full_batch || (is_uniform_subset(scheme) && scheme.batch_size() == n)) {
    return {gc.ell, 0.0};
  }
  if (is_uniform_subset(scheme)) {
    const double b = static_cast<double>(scheme.batch_size());
    const double spread = (nd - b) / (b * (nd - 1.0));
    return {nd / b * (b - 1.0) / (nd - 1.0) * gc.ell + spread * gc.ell_max, spread * gc.sigma1_sq};
  }

  const SchemeStats stats = scheme_stats(scheme);
  if (!stats.z) throw Error(ErrorCode::NoClosedForm, "no constant z for scheme " + scheme.name());
  const double z = *stats.z;
  const auto& p = stats.inclusion;
  ECConstants ec;
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, gc.ell_i[i] * (1.0 - p[i] * z) / (nd * p[i]));
  ec.ell_xi = z * gc.ell + worst;

  // E|xi_v(x*)|^2 = (1/n^2) sum_{i,j} P_ij / (p_i p_j) <xi_i, xi_j>.
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      acc += scheme.pair_inclusion(i, j) / (p[i] * p[j]) * gc.values_at_solution[i].dot(gc.values_at_solution[j]);
    }
  }
  ec.sigma_sq = std::max(0.0, acc / (nd * nd));
  return ec;
}

GameConstants with_condition_number(GameConstants gc, const ECConstants& ec) {
  gc.kappa_G = ec.ell_xi / gc.mu;
  return gc;
}

HamiltonianConstants hamiltonian_constants(const QuadraticGame& game, const SamplingScheme& scheme) {
  const std::size_t n = game.num_components();
  if (scheme.n() != n) throw Error(ErrorCode::DimensionMismatch, "scheme and game disagree on n");
  const bool full = scheme.kind() == SchemeKind::full_batch ||
                    (is_uniform_subset(scheme) && scheme.batch_size() == n);
  if (!full && scheme.kind() != SchemeKind::single_element &&
      !(scheme.kind() == SchemeKind::minibatch && scheme.batch_size() == 1)) {
    throw Error(ErrorCode::UnsupportedScheme,
                "Hamiltonian constants need single-element or full-batch sampling, got " + scheme.name());
  }
  if (!game.has_equilibrium()) throw Error(ErrorCode::Singular, "mean Jacobian is singular");

  HamiltonianConstants hc;
  const std::vector<double> sv = singular_values(game.mean_jacobian());
  hc.L_H = sv.front() * sv.front();
  hc.mu_H = sv.back() * sv.back();
  if (full) {
    hc.calL_H = hc.L_H;
    hc.sigma_H_sq = 0.0;
    return hc;
  }

  const Vector x_star = game.equilibrium();
  std::vector<Vector> values;
  values.reserve(n);
  for (std::size_t i = 0; i < n; ++i) values.push_back(game.component_value(i, x_star));

  double sigma = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Matrix& ji = game.jacobian(i);
    for (std::size_t j = i; j < n; ++j) {
      const Matrix& jj = game.jacobian(j);
      const Matrix prod = ji.transpose() * jj;
      hc.calL_H = std::max(hc.calL_H, symmetric_spectral_norm(0.5 * (prod + prod.transpose())));
      const double g = (0.5 * (ji.transpose() * values[j] + jj.transpose() * values[i])).squaredNorm();
      sigma += (i == j ? 1.0 : 2.0) * g;
    }
  }
  hc.sigma_H_sq = sigma / static_cast<double>(n * n);
  return hc;
}

double minibatch_total_complexity(const GameConstants& gc, std::size_t b, double epsilon) {
  const ECConstants ec = ec_constants(gc, SamplingScheme::minibatch(gc.n(), b));
  const double bd = static_cast<double>(b);
  return 2.0 / gc.mu * std::max(bd * ec.ell_xi, bd * 2.0 * ec.sigma_sq / (epsilon * gc.mu));
}

OptimalMinibatch optimal_minibatch(const GameConstants& gc, double epsilon) {
  require_positive(gc.mu, "mu");
  require_positive(epsilon, "epsilon");
  const std::size_t n = gc.n();
  OptimalMinibatch out;
  if (n < 2 || gc.sigma1_sq <= gc.ell_max) return out;

  const double nd = static_cast<double>(n);
  const double noise = 2.0 / (epsilon * gc.mu) * gc.sigma1_sq;
  out.b_star_real = nd * (gc.ell - gc.ell_max + noise) / (nd * gc.ell - gc.ell_max + noise);
  const double clamped = std::clamp(out.b_star_real, 1.0, nd);
  const auto lo = static_cast<std::size_t>(std::floor(clamped));
  const auto hi = static_cast<std::size_t>(std::ceil(clamped));
  out.b_star = lo;
  if (hi != lo && minibatch_total_complexity(gc, hi, epsilon) < minibatch_total_complexity(gc, lo, epsilon)) {
    out.b_star = hi;
  }
  return out;
}

const char* to_string(BoundKind kind) noexcept {
  switch (kind) {
    case BoundKind::sgda_constant: return "sgda_constant";
    case BoundKind::sgda_constant_large_step: return "sgda_constant_large_step";
    case BoundKind::sgda_switching: return "sgda_switching";
    case BoundKind::sco_constant: return "sco_constant";
    case BoundKind::shgd_constant: return "shgd_constant";
    case BoundKind::sco_switching: return "sco_switching";
  }
  return "unknown";
}

std::size_t sgda_switch_point(double ell_xi, double mu) {
  require_positive(mu, "mu");
  return 4 * static_cast<std::size_t>(std::ceil(ell_xi / mu));
}

double sco_switch_threshold(double ell_xi, double calL_H, double mu, double mu_H) {
  if (!(mu >= 0.0) || !(mu_H >= 0.0) || !(mu + mu_H > 0.0)) {
    throw Error(ErrorCode::InvalidRange, "need mu, mu_H >= 0 with mu + mu_H > 0");
  }
  return 8.0 * std::max(ell_xi, calL_H) / (mu_H + mu);
}

std::size_t sco_switch_point(double ell_xi, double calL_H, double mu, double mu_H) {
  return static_cast<std::size_t>(std::ceil(sco_switch_threshold(ell_xi, calL_H, mu, mu_H)));
}

std::size_t bound_start(BoundKind kind, const BoundParams& p) {
  switch (kind) {
    case BoundKind::sgda_switching: return sgda_switch_point(p.ell_xi, p.mu);
    case BoundKind::sco_switching: return sco_switch_point(p.ell_xi, p.calL_H, p.mu, p.mu_H);
    default: return 0;
  }
}

void check_bound_preconditions(BoundKind kind, const BoundParams& p) {
  switch (kind) {
    case BoundKind::sgda_constant:
      require_positive(p.mu, "mu");
      require_positive(p.alpha, "alpha");
      require_step(p.alpha, 1.0 / (2.0 * p.ell_xi), false, "alpha");
      break;
    case BoundKind::sgda_constant_large_step:
      require_positive(p.mu, "mu");
      require_positive(p.alpha, "alpha");
      require_step(p.alpha, 1.0 / p.ell_xi, true, "alpha");
      break;
    case BoundKind::sgda_switching:
      require_positive(p.mu, "mu");
      require_positive(p.ell_xi, "ell_xi");
      break;
    case BoundKind::sco_constant:
      require_step(p.alpha, 1.0 / (4.0 * p.ell_xi), false, "alpha");
      require_step(p.gamma, 1.0 / (4.0 * p.calL_H), false, "gamma");
      if (!(p.gamma * p.mu_H + p.alpha * p.mu > 0.0)) {
        throw Error(ErrorCode::StepSizeOutOfRange, "gamma mu_H + alpha mu must be positive");
      }
      break;
    case BoundKind::shgd_constant:
      if (p.alpha != 0.0) throw Error(ErrorCode::StepSizeOutOfRange, "SHGD takes alpha = 0");
      require_positive(p.mu_H, "mu_H");
      require_positive(p.gamma, "gamma");
      require_step(p.gamma, 1.0 / (2.0 * p.calL_H), false, "gamma");
      break;
    case BoundKind::sco_switching:
      sco_switch_threshold(p.ell_xi, p.calL_H, p.mu, p.mu_H);
      break;
  }
}

double theoretical_bound(BoundKind kind, const BoundParams& p, std::size_t k, double r0_sq) {
  check_bound_preconditions(kind, p);
  const double kd = static_cast<double>(k);
  const double e2 = std::numbers::e * std::numbers::e;
  switch (kind) {
    case BoundKind::sgda_constant:
      return pow_k(1.0 - p.alpha * p.mu, k) * r0_sq + 2.0 * p.alpha * p.sigma_sq / p.mu;
    case BoundKind::sgda_constant_large_step: {
      const double shrink = 1.0 - p.alpha * p.ell_xi;
      return pow_k(1.0 - 2.0 * p.alpha * p.mu * shrink, k) * r0_sq + p.alpha * p.sigma_sq / (p.mu * shrink);
    }
    case BoundKind::sgda_switching: {
      const std::size_t start = sgda_switch_point(p.ell_xi, p.mu);
      if (k < start) {
        throw Error(ErrorCode::SwitchNotReached,
                    "k = " + std::to_string(k) + " is below the switch point " + std::to_string(start));
      }
      const double ceil_kappa = std::ceil(p.ell_xi / p.mu);
      return 8.0 * p.sigma_sq / (p.mu * p.mu * kd) + 16.0 * ceil_kappa * ceil_kappa * r0_sq / (e2 * kd * kd);
    }
    case BoundKind::sco_constant: {
      const double rate = p.gamma * p.mu_H + p.alpha * p.mu;
      return pow_k(1.0 - rate, k) * r0_sq +
             4.0 * (p.alpha * p.alpha * p.sigma_sq + p.gamma * p.gamma * p.sigma_H_sq) / rate;
    }
    case BoundKind::shgd_constant:
      return pow_k(1.0 - p.gamma * p.mu_H, k) * r0_sq + 2.0 * p.gamma * p.sigma_H_sq / p.mu_H;
    case BoundKind::sco_switching: {
      const double k_star = sco_switch_threshold(p.ell_xi, p.calL_H, p.mu, p.mu_H);
      const std::size_t start = static_cast<std::size_t>(std::ceil(k_star));
      if (k < start || k == 0) {
        throw Error(ErrorCode::SwitchNotReached,
                    "k = " + std::to_string(k) + " is below the switch point " + std::to_string(start));
      }
      const double m = p.mu + p.mu_H;
      return 16.0 * (p.sigma_H_sq + p.sigma_sq) / (m * m * kd) + k_star * k_star * r0_sq / (e2 * kd * kd);
    }
  }
  throw Error(ErrorCode::InvalidConfig, "unknown bound");
}

}  // namespace svi
