#include "svi/solvers.hpp"

#include <algorithm>
#include <cmath>

#include "svi/constants.hpp"
#include "svi/error.hpp"

namespace svi {

const char* to_string(Method method) noexcept {
  switch (method) {
    case Method::sgda: return "sgda";
    case Method::shgd: return "shgd";
    case Method::sco: return "sco";
    case Method::gda: return "gda";
    case Method::co: return "co";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  for (Method m : {Method::sgda, Method::shgd, Method::sco, Method::gda, Method::co}) {
    if (name == to_string(m)) return m;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown method '" + name + "'");
}

bool uses_hamiltonian(Method method) noexcept {
  return method == Method::shgd || method == Method::sco || method == Method::co;
}

bool is_deterministic(Method method) noexcept { return method == Method::gda || method == Method::co; }

StepSizeSchedule StepSizeSchedule::constant(double alpha, double gamma) {
  if (!(alpha >= 0.0) || !(gamma >= 0.0) || !std::isfinite(alpha) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::InvalidRange, "constant step sizes must be finite and non-negative");
  }
  StepSizeSchedule s;
  s.kind_ = ScheduleKind::constant;
  s.fixed_ = {alpha, gamma};
  return s;
}

StepSizeSchedule StepSizeSchedule::sgda_switching(double ell_xi, double mu) {
  if (!(ell_xi > 0.0) || !(mu > 0.0)) throw Error(ErrorCode::InvalidRange, "SGDA switching needs ell_xi, mu > 0");
  StepSizeSchedule s;
  s.kind_ = ScheduleKind::sgda_switching;
  s.fixed_ = {1.0 / (2.0 * ell_xi), 0.0};
  s.modulus_ = mu;
  s.switch_ = sgda_switch_point(ell_xi, mu);
  return s;
}

StepSizeSchedule StepSizeSchedule::sco_switching(double ell_xi, double calL_H, double mu, double mu_H) {
  const double psi = std::max(ell_xi, calL_H);
  if (!(psi > 0.0)) throw Error(ErrorCode::InvalidRange, "SCO switching needs max(ell_xi, calL_H) > 0");
  StepSizeSchedule s;
  s.kind_ = ScheduleKind::sco_switching;
  s.switch_ = sco_switch_point(ell_xi, calL_H, mu, mu_H);
  s.fixed_ = {1.0 / (4.0 * psi), 1.0 / (4.0 * psi)};
  s.modulus_ = mu_H + mu;
  return s;
}

std::optional<std::size_t> StepSizeSchedule::switch_point() const noexcept {
  if (kind_ == ScheduleKind::constant) return std::nullopt;
  return switch_;
}

StepSizes StepSizeSchedule::at(std::size_t k) const {
  if (kind_ == ScheduleKind::constant || k <= switch_) return fixed_;
  const double kd = static_cast<double>(k);
  const double step = (2.0 * kd + 1.0) / ((kd + 1.0) * (kd + 1.0) * modulus_);
  if (kind_ == ScheduleKind::sgda_switching) return {step, 0.0};
  return {step, step};
}

StepSizes step_sizes(const StepSizeSchedule& schedule, std::size_t k) { return schedule.at(k); }

namespace {

void check_sampling_vector(const FiniteSumOperator& op, const SamplingVector& v) {
  if (v.indices.size() != v.weights.size()) {
    throw Error(ErrorCode::DimensionMismatch, "sampling vector has mismatched indices and weights");
  }
  for (std::size_t i : v.indices) {
    if (i >= op.num_components()) throw Error(ErrorCode::DimensionMismatch, "sampling index out of range");
  }
}

Vector hamiltonian_from_values(const FiniteSumOperator& op, const Vector& x, const SamplingVector& u,
                               const SamplingVector& v, const Vector& xi_u, const Vector& xi_v) {
  const Vector lhs = sampled_jacobian_transpose_apply(op, u, x, xi_v);
  const Vector rhs = sampled_jacobian_transpose_apply(op, v, x, xi_u);
  return 0.5 * (lhs + rhs);
}

}  // namespace

Vector stochastic_hamiltonian_gradient(const FiniteSumOperator& op, const Vector& x, const SamplingVector& u,
                                       const SamplingVector& v) {
  if (static_cast<std::size_t>(x.size()) != op.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "point has the wrong dimension");
  }
  check_sampling_vector(op, u);
  check_sampling_vector(op, v);
  return hamiltonian_from_values(op, x, u, v, sampled_value(op, u, x), sampled_value(op, v, x));
}

Vector solver_step(Method method, const FiniteSumOperator& op, const Vector& x, const SamplingVector& v,
                   const SamplingVector* u, StepSizes steps) {
  if (!uses_hamiltonian(method)) steps.gamma = 0.0;
  if (method == Method::shgd) steps.alpha = 0.0;
  if (steps.gamma != 0.0 && u == nullptr) {
    throw Error(ErrorCode::MissingSecondDraw, std::string(to_string(method)) + " needs a second sampling vector");
  }

  Vector next = x;
  if (steps.alpha == 0.0 && steps.gamma == 0.0) return next;
  const Vector xi_v = sampled_value(op, v, x);
  if (steps.alpha != 0.0) next -= steps.alpha * xi_v;
  if (steps.gamma != 0.0) {
    const Vector xi_u = sampled_value(op, *u, x);
    // grad H_{v,u} = 1/2 [J_v' xi_u + J_u' xi_v].
    next -= steps.gamma * hamiltonian_from_values(op, x, v, *u, xi_v, xi_u);
  }
  return next;
}

RunTrace run(const RunConfig& config) {
  if (!config.op) throw Error(ErrorCode::InvalidConfig, "run needs an operator");
  if (!config.schedule) throw Error(ErrorCode::InvalidConfig, "run needs a step-size schedule");
  const FiniteSumOperator& op = *config.op;
  const std::size_t n = op.num_components();

  SamplingScheme scheme = SamplingScheme::full_batch(n);
  if (!is_deterministic(config.method)) {
    if (!config.scheme) throw Error(ErrorCode::InvalidConfig, "stochastic methods need a sampling scheme");
    if (config.scheme->n() != n) throw Error(ErrorCode::DimensionMismatch, "scheme and operator disagree on n");
    scheme = *config.scheme;
  }

  Rng rng(config.seed);
  std::optional<Vector> x_star;
  if (op.has_equilibrium()) x_star = op.equilibrium();

  Vector x;
  if (config.initial_point) {
    if (static_cast<std::size_t>(config.initial_point->size()) != op.dim()) {
      throw Error(ErrorCode::DimensionMismatch, "initial point has the wrong dimension");
    }
    x = *config.initial_point;
  } else {
    Vector z = rng.normal_vector(op.dim());
    z /= z.norm();
    x = x_star ? Vector(*x_star + z) : z;
  }

  RunTrace trace;
  trace.seed = config.seed;
  trace.dist_sq.reserve(x_star ? config.iterations + 1 : 0);
  trace.residual_sq.reserve(config.iterations + 1);
  trace.steps.reserve(config.iterations);

  auto record = [&](const Vector& point) {
    if (x_star) trace.dist_sq.push_back((point - *x_star).squaredNorm());
    trace.residual_sq.push_back(op.full_value(point).squaredNorm());
    if (config.record_iterates) trace.iterates.push_back(point);
  };
  record(x);
  const double base = x_star ? trace.dist_sq.front() : trace.residual_sq.front();

  const bool hamiltonian = uses_hamiltonian(config.method);
  for (std::size_t k = 0; k < config.iterations; ++k) {
    StepSizes steps = config.schedule->at(k);
    if (!hamiltonian) steps.gamma = 0.0;
    if (config.method == Method::shgd) steps.alpha = 0.0;

    const SamplingVector v = draw(scheme, rng);
    std::optional<SamplingVector> u;
    if (hamiltonian && steps.gamma != 0.0) u = draw(scheme, rng);
    x = solver_step(config.method, op, x, v, u ? &*u : nullptr, steps);
    trace.steps.push_back(steps);
    record(x);

    const double now = x_star ? trace.dist_sq.back() : trace.residual_sq.back();
    if (!x.allFinite() || !std::isfinite(now) || now > kDivergenceRatio * base) {
      trace.diverged = true;
      break;
    }
  }
  trace.final_iterate = x;
  return trace;
}

}  // namespace svi
