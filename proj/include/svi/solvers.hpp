#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "svi/numerics.hpp"
#include "svi/operators.hpp"
#include "svi/sampling.hpp"

namespace svi {

enum class Method { sgda, shgd, sco, gda, co };

const char* to_string(Method method) noexcept;
/// Throws InvalidConfig on an unknown name.
Method parse_method(const std::string& name);

/// True for the methods with a Hamiltonian term (shgd, sco, co).
bool uses_hamiltonian(Method method) noexcept;
/// True for gda and co.
bool is_deterministic(Method method) noexcept;

struct StepSizes {
  double alpha = 0.0;
  double gamma = 0.0;
};

enum class ScheduleKind { constant, sgda_switching, sco_switching };

class StepSizeSchedule {
 public:
  static StepSizeSchedule constant(double alpha, double gamma);
  /// alpha_k = 1/(2 ell_xi) for k <= 4 ceil(ell_xi/mu), then (2k+1)/((k+1)^2 mu). gamma_k = 0.
  static StepSizeSchedule sgda_switching(double ell_xi, double mu);
  /// alpha_k = gamma_k = 1/(4 psi) for k <= ceil(k*), then (2k+1)/((k+1)^2 (mu_H + mu)),
  /// with psi = max(ell_xi, calL_H) and k* = 8 psi / (mu_H + mu). mu = 0 is allowed.
  static StepSizeSchedule sco_switching(double ell_xi, double calL_H, double mu, double mu_H);

  ScheduleKind kind() const noexcept { return kind_; }
  /// Last iteration on the constant branch; nullopt for constant schedules.
  std::optional<std::size_t> switch_point() const noexcept;
  StepSizes at(std::size_t k) const;

 private:
  StepSizeSchedule() = default;

  ScheduleKind kind_ = ScheduleKind::constant;
  StepSizes fixed_;
  double modulus_ = 0.0;
  std::size_t switch_ = 0;
};

StepSizes step_sizes(const StepSizeSchedule& schedule, std::size_t k);

/// 1/2 [J_u(x)' xi_v(x) + J_v(x)' xi_u(x)].
Vector stochastic_hamiltonian_gradient(const FiniteSumOperator& op, const Vector& x, const SamplingVector& u,
                                       const SamplingVector& v);

/// One update. The Hamiltonian term uses grad H_{v,u}; u may be null when
/// gamma is zero. Zero step sizes skip their term entirely, so sco with
/// gamma = 0 reproduces sgda bit for bit (and alpha = 0 reproduces shgd).
/// Throws MissingSecondDraw.
Vector solver_step(Method method, const FiniteSumOperator& op, const Vector& x, const SamplingVector& v,
                   const SamplingVector* u, StepSizes steps);

struct RunConfig {
  Method method = Method::sgda;
  std::shared_ptr<const FiniteSumOperator> op;
  std::optional<SamplingScheme> scheme;  // ignored (full batch) for gda/co
  std::optional<StepSizeSchedule> schedule;
  std::size_t iterations = 0;
  std::uint64_t seed = 0;
  std::optional<Vector> initial_point;
  bool record_iterates = false;
};

struct RunTrace {
  std::vector<double> dist_sq;      // |x^k - x*|^2, empty without x*
  std::vector<double> residual_sq;  // |xi(x^k)|^2
  std::vector<StepSizes> steps;     // step sizes used at each iteration
  std::vector<Vector> iterates;     // only with record_iterates
  Vector final_iterate;
  std::uint64_t seed = 0;
  bool diverged = false;

  /// Number of recorded points (iterations completed + 1).
  std::size_t length() const noexcept { return residual_sq.size(); }
};

/// Draws v^k, then u^k only when the method has a Hamiltonian term and
/// gamma_k != 0, from one Rng seeded with config.seed. The default x^0 is
/// x* + z/|z| for a standard normal z drawn first.
RunTrace run(const RunConfig& config);

/// Divergence threshold on |x^k - x*|^2 / |x^0 - x*|^2.
inline constexpr double kDivergenceRatio = 1e12;

}  // namespace svi
