#include "svi/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "svi/error.hpp"

namespace svi {

void CheckReport::add(double margin, const Vector& at) {
  if (margins.empty() || margin < worst_margin) {
    worst_margin = margin;
    worst_index = margins.size();
  }
  if (margin < 0.0 || std::isnan(margin)) {
    witness_indices.push_back(margins.size());
    witnesses.push_back(at);
  }
  margins.push_back(margin);
  ++count;
}

namespace {

bool own_margins_pass(const CheckReport& r) {
  return std::all_of(r.margins.begin(), r.margins.end(), [&](double m) { return m >= -r.tolerance; });
}

bool subreports_pass(const CheckReport& r) {
  return std::all_of(r.subreports.begin(), r.subreports.end(),
                     [](const CheckReport& s) { return s.informational || s.passed; });
}

}  // namespace

void CheckReport::finalize() {
  std::vector<Vector> kept;
  std::vector<std::size_t> kept_idx;
  for (std::size_t w = 0; w < witnesses.size(); ++w) {
    const double m = margins[witness_indices[w]];
    if (!(m >= -tolerance)) {
      kept.push_back(std::move(witnesses[w]));
      kept_idx.push_back(witness_indices[w]);
    }
  }
  witnesses = std::move(kept);
  witness_indices = std::move(kept_idx);
  passed = own_margins_pass(*this) && subreports_pass(*this);
}

bool CheckReport::certify() const {
  for (const auto& s : subreports) {
    if (!s.certify()) return false;
  }
  const bool verdict = own_margins_pass(*this) && subreports_pass(*this);
  if (verdict != passed) return false;
  // A failing report must say where.
  if (!own_margins_pass(*this) && witnesses.empty()) return false;
  if (!margins.empty()) {
    const double worst = *std::min_element(margins.begin(), margins.end());
    if (!(worst == worst_margin) && !std::isnan(worst)) return false;
  }
  return true;
}

std::vector<Vector> sample_points(const Vector& center, std::size_t count, double radius, Rng& rng) {
  std::vector<Vector> out;
  out.reserve(count);
  for (std::size_t p = 0; p < count; ++p) {
    Vector g = rng.normal_vector(static_cast<std::size_t>(center.size()));
    const double norm = g.norm();
    const double r = radius * rng.uniform();
    out.push_back(norm == 0.0 ? center : Vector(center + (r / norm) * g));
  }
  return out;
}

namespace {

Vector require_equilibrium(const FiniteSumOperator& op) {
  if (!op.has_equilibrium()) throw Error(ErrorCode::NoEquilibrium, "check needs a known equilibrium");
  return op.equilibrium();
}

struct EcTerms {
  double rhs_inner = 0.0;   // <xi(x), x - x*>
  double diff_sq = 0.0;     // E|xi_v(x) - xi_v(x*)|^2
  double value_sq = 0.0;    // E|xi_v(x)|^2
};

EcTerms ec_terms(const FiniteSumOperator& op, const std::vector<SupportEntry>& support,
                 const std::vector<Vector>& at_solution, const Vector& x_star, const Vector& x) {
  EcTerms t;
  t.rhs_inner = op.full_value(x).dot(x - x_star);
  for (std::size_t s = 0; s < support.size(); ++s) {
    const Vector xv = sampled_value(op, support[s].vector, x);
    t.diff_sq += support[s].probability * (xv - at_solution[s]).squaredNorm();
    t.value_sq += support[s].probability * xv.squaredNorm();
  }
  return t;
}

std::vector<Vector> values_on_support(const FiniteSumOperator& op, const std::vector<SupportEntry>& support,
                                      const Vector& x) {
  std::vector<Vector> out;
  out.reserve(support.size());
  for (const auto& e : support) out.push_back(sampled_value(op, e.vector, x));
  return out;
}

}  // namespace

double ec_margin(const FiniteSumOperator& op, const std::vector<SupportEntry>& support, double ell_xi,
                 const Vector& x) {
  const Vector x_star = require_equilibrium(op);
  const EcTerms t = ec_terms(op, support, values_on_support(op, support, x_star), x_star, x);
  return ell_xi * t.rhs_inner - t.diff_sq;
}

CheckReport check_ec_at(const FiniteSumOperator& op, const SamplingScheme& scheme, double ell_xi,
                        const std::vector<Vector>& points) {
  const Vector x_star = require_equilibrium(op);
  const std::vector<SupportEntry> support = enumerate_support(scheme);
  const std::vector<Vector> at_solution = values_on_support(op, support, x_star);
  double sigma_sq = 0.0;
  for (std::size_t s = 0; s < support.size(); ++s) sigma_sq += support[s].probability * at_solution[s].squaredNorm();

  CheckReport ec;
  ec.name = "expected_cocoercivity";
  CheckReport lemma;
  lemma.name = "second_moment_bound";
  double scale = 1.0;
  double lemma_scale = 1.0;
  for (const Vector& x : points) {
    const EcTerms t = ec_terms(op, support, at_solution, x_star, x);
    const double lhs = ell_xi * t.rhs_inner;
    ec.add(lhs - t.diff_sq, x);
    scale = std::max({scale, std::abs(lhs), t.diff_sq});
    const double bound = 2.0 * lhs + 2.0 * sigma_sq;
    lemma.add(bound - t.value_sq, x);
    lemma_scale = std::max({lemma_scale, std::abs(bound), t.value_sq});
  }
  ec.tolerance = kCheckTolerance * scale;
  lemma.tolerance = kCheckTolerance * lemma_scale;
  lemma.finalize();
  ec.subreports.push_back(std::move(lemma));
  ec.finalize();
  return ec;
}

CheckReport check_ec(const FiniteSumOperator& op, const SamplingScheme& scheme, double ell_xi, std::size_t points,
                     double radius, Rng& rng) {
  const Vector x_star = require_equilibrium(op);
  // Fail early, before any sampling.
  if (support_size(scheme) > kMaxSupportSize) enumerate_support(scheme);
  return check_ec_at(op, scheme, ell_xi, sample_points(x_star, points, radius, rng));
}

double monotonicity_margin(const FiniteSumOperator& op, const Vector& x, const Vector& y) {
  return (op.full_value(x) - op.full_value(y)).dot(x - y);
}

CheckReport check_monotonicity_class_at(const FiniteSumOperator& op, double mu, double ell_star,
                                        const std::vector<Vector>& points,
                                        const std::vector<std::pair<Vector, Vector>>& probe_pairs) {
  const Vector x_star = require_equilibrium(op);
  const Vector xi_star = op.full_value(x_star);

  CheckReport quasi;
  quasi.name = "quasi_strong_monotonicity";
  CheckReport coco;
  coco.name = "cocoercivity_around_solution";
  double q_scale = 1.0;
  double c_scale = 1.0;
  for (const Vector& x : points) {
    const Vector xi = op.full_value(x);
    const double inner = xi.dot(x - x_star);
    const double dist_sq = (x - x_star).squaredNorm();
    quasi.add(inner - mu * dist_sq, x);
    q_scale = std::max({q_scale, std::abs(inner), mu * dist_sq});
    const double diff_sq = (xi - xi_star).squaredNorm();
    coco.add(ell_star * inner - diff_sq, x);
    c_scale = std::max({c_scale, std::abs(ell_star * inner), diff_sq});
  }
  quasi.tolerance = kCheckTolerance * q_scale;
  coco.tolerance = kCheckTolerance * c_scale;
  quasi.finalize();
  coco.finalize();

  CheckReport probe;
  probe.name = "monotonicity_probe";
  probe.informational = true;
  double p_scale = 1.0;
  for (const auto& [x, y] : probe_pairs) {
    const double m = monotonicity_margin(op, x, y);
    Vector stacked(x.size() + y.size());
    stacked << x, y;
    probe.add(m, stacked);
    p_scale = std::max(p_scale, std::abs(m));
  }
  probe.tolerance = kCheckTolerance * p_scale;
  probe.finalize();

  CheckReport out;
  out.name = "monotonicity_class";
  out.count = points.size();
  out.subreports = {std::move(quasi), std::move(coco), std::move(probe)};
  out.finalize();
  return out;
}

CheckReport check_monotonicity_class(const FiniteSumOperator& op, double mu, double ell_star, std::size_t points,
                                     double radius, Rng& rng) {
  const Vector x_star = require_equilibrium(op);
  std::vector<Vector> xs = sample_points(x_star, points, radius, rng);
  std::vector<std::pair<Vector, Vector>> pairs;
  for (std::size_t p = 0; p + 1 < xs.size(); p += 2) pairs.emplace_back(xs[p], xs[p + 1]);
  return check_monotonicity_class_at(op, mu, ell_star, xs, pairs);
}

CheckReport check_unbiasedness_with_support(const FiniteSumOperator& op, const std::vector<SupportEntry>& support,
                                            const std::vector<Vector>& points) {
  CheckReport value;
  value.name = "operator_estimator";
  CheckReport hamiltonian;
  hamiltonian.name = "hamiltonian_estimator";
  for (const Vector& x : points) {
    const Vector xi = op.full_value(x);
    const Vector grad = op.full_jacobian(x).transpose() * xi;

    std::vector<Vector> xs;
    xs.reserve(support.size());
    Vector mean_xi = Vector::Zero(x.size());
    for (const auto& e : support) {
      xs.push_back(sampled_value(op, e.vector, x));
      mean_xi += e.probability * xs.back();
    }
    Vector mean_grad = Vector::Zero(x.size());
    for (std::size_t a = 0; a < support.size(); ++a) {
      for (std::size_t b = 0; b < support.size(); ++b) {
        const Vector lhs = sampled_jacobian_transpose_apply(op, support[a].vector, x, xs[b]);
        const Vector rhs = sampled_jacobian_transpose_apply(op, support[b].vector, x, xs[a]);
        mean_grad += support[a].probability * support[b].probability * (0.5 * (lhs + rhs));
      }
    }
    value.add(kUnbiasedTolerance * (1.0 + xi.norm()) - (mean_xi - xi).norm(), x);
    hamiltonian.add(kUnbiasedTolerance * (1.0 + grad.norm()) - (mean_grad - grad).norm(), x);
  }
  value.finalize();
  hamiltonian.finalize();

  CheckReport out;
  out.name = "unbiasedness";
  out.count = points.size();
  out.subreports = {std::move(value), std::move(hamiltonian)};
  out.finalize();
  return out;
}

CheckReport check_unbiasedness(const FiniteSumOperator& op, const SamplingScheme& scheme, std::size_t points,
                               Rng& rng) {
  const std::vector<SupportEntry> support = enumerate_support(scheme);
  const Vector center = op.has_equilibrium() ? op.equilibrium() : Vector(Vector::Zero(op.dim()));
  return check_unbiasedness_with_support(op, support, sample_points(center, points, kDefaultRadius, rng));
}

CheckReport check_bound_envelope(const std::vector<RunTrace>& traces, BoundKind kind, const BoundParams& params,
                                 double slack, std::size_t k_begin, std::optional<std::size_t> k_end) {
  check_bound_preconditions(kind, params);
  const bool noiseless = params.sigma_sq == 0.0 && params.sigma_H_sq == 0.0;
  if (traces.empty() || (!noiseless && traces.size() < kMinEnvelopeSeeds)) {
    throw Error(ErrorCode::TooFewSeeds, "envelope check needs at least " + std::to_string(kMinEnvelopeSeeds) +
                                            " traces, got " + std::to_string(traces.size()));
  }
  std::size_t shortest = std::numeric_limits<std::size_t>::max();
  std::size_t longest = 0;
  for (const auto& t : traces) {
    if (t.dist_sq.empty()) throw Error(ErrorCode::NoEquilibrium, "traces carry no distance to a solution");
    shortest = std::min(shortest, t.dist_sq.size());
    longest = std::max(longest, t.dist_sq.size());
  }

  const double seeds = static_cast<double>(traces.size());
  double r0_sq = 0.0;
  for (const auto& t : traces) r0_sq += t.dist_sq.front();
  r0_sq /= seeds;

  const std::size_t first = std::max(k_begin, bound_start(kind, params));
  const std::size_t last = std::min(k_end.value_or(longest - 1), longest - 1);

  CheckReport report;
  report.name = std::string("envelope_") + to_string(kind);
  report.tolerance = kCheckTolerance;
  Vector at(1);
  for (std::size_t k = first; k <= last; ++k) {
    at(0) = static_cast<double>(k);
    if (k >= shortest) {
      // Some trace diverged before reaching k.
      report.add(-std::numeric_limits<double>::infinity(), at);
      break;
    }
    double mean = 0.0;
    for (const auto& t : traces) mean += t.dist_sq[k];
    mean /= seeds;
    const double bound = theoretical_bound(kind, params, k, r0_sq);
    // Relative margin: fraction of slack * bound left unused.
    report.add((slack * bound - mean) / (slack * bound), at);
  }
  report.finalize();
  return report;
}

}  // namespace svi
