#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "svi/constants.hpp"
#include "svi/numerics.hpp"
#include "svi/operators.hpp"
#include "svi/sampling.hpp"
#include "svi/solvers.hpp"

namespace svi {

/// Outcome of one verification. Margins are signed, negative meaning a
/// violation; the check passes when every margin is >= -tolerance and every
/// non-informational subreport passes.
struct CheckReport {
  std::string name;
  bool passed = true;
  bool informational = false;
  double worst_margin = 0.0;
  double tolerance = 0.0;
  std::optional<std::size_t> worst_index;
  std::vector<double> margins;
  std::vector<Vector> witnesses;  // points (or pairs, stacked) with margin < -tolerance
  std::vector<std::size_t> witness_indices;  // positions in margins
  std::size_t count = 0;
  std::vector<CheckReport> subreports;

  /// Appends a margin, tracking the worst one and its witness.
  void add(double margin, const Vector& at);
  /// Sets passed from the stored margins and subreports.
  void finalize();
  /// Recomputes the verdict from stored data; true when it matches `passed`.
  bool certify() const;
};

inline constexpr double kCheckTolerance = 1e-9;
inline constexpr double kUnbiasedTolerance = 1e-12;
inline constexpr double kDefaultRadius = 10.0;

/// Points x* + r g/|g| with r uniform on [0, radius] and g standard normal.
std::vector<Vector> sample_points(const Vector& center, std::size_t count, double radius, Rng& rng);

/// ell_xi <xi(x), x - x*> - E|xi_v(x) - xi_v(x*)|^2 by enumeration.
double ec_margin(const FiniteSumOperator& op, const std::vector<SupportEntry>& support, double ell_xi,
                 const Vector& x);

/// Expected co-coercivity at random points, with a second-moment subreport
/// E|xi_v(x)|^2 <= 2 ell_xi <xi(x), x - x*> + 2 sigma^2.
/// Throws SupportTooLarge, NoEquilibrium.
CheckReport check_ec(const FiniteSumOperator& op, const SamplingScheme& scheme, double ell_xi, std::size_t points,
                     double radius, Rng& rng);
CheckReport check_ec_at(const FiniteSumOperator& op, const SamplingScheme& scheme, double ell_xi,
                        const std::vector<Vector>& points);

/// <xi(x) - xi(y), x - y>.
double monotonicity_margin(const FiniteSumOperator& op, const Vector& x, const Vector& y);

/// Subreports: quasi_strong_monotonicity, cocoercivity_around_solution and
/// an informational monotonicity probe over consecutive point pairs.
CheckReport check_monotonicity_class(const FiniteSumOperator& op, double mu, double ell_star, std::size_t points,
                                     double radius, Rng& rng);
CheckReport check_monotonicity_class_at(const FiniteSumOperator& op, double mu, double ell_star,
                                        const std::vector<Vector>& points,
                                        const std::vector<std::pair<Vector, Vector>>& probe_pairs);

/// Enumeration means of xi_v and grad H_{u,v} against xi and J'xi.
CheckReport check_unbiasedness(const FiniteSumOperator& op, const SamplingScheme& scheme, std::size_t points,
                               Rng& rng);
CheckReport check_unbiasedness_with_support(const FiniteSumOperator& op, const std::vector<SupportEntry>& support,
                                            const std::vector<Vector>& points);

/// Mean of |x^k - x*|^2 over traces against slack * bound(k) for k in
/// [max(k_begin, bound start), k_end]. Needs 30 traces unless the bound is
/// noise-free. Throws TooFewSeeds, StepSizeOutOfRange, NoEquilibrium.
CheckReport check_bound_envelope(const std::vector<RunTrace>& traces, BoundKind kind, const BoundParams& params,
                                 double slack, std::size_t k_begin = 0,
                                 std::optional<std::size_t> k_end = std::nullopt);

inline constexpr std::size_t kMinEnvelopeSeeds = 30;

}  // namespace svi
