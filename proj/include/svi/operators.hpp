#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "svi/numerics.hpp"

namespace svi {

/// An operator of the form xi(x) = (1/n) sum_i xi_i(x) on R^d.
///
/// Implementations are immutable after construction; every evaluation is pure
/// and may be called concurrently.
class FiniteSumOperator {
 public:
  virtual ~FiniteSumOperator() = default;

  virtual std::size_t num_components() const = 0;
  virtual std::size_t dim() const = 0;

  virtual Vector component_value(std::size_t i, const Vector& x) const = 0;
  virtual Matrix component_jacobian(std::size_t i, const Vector& x) const = 0;

  /// J_i(x)^T w. Override when the Jacobian can be applied without being formed.
  virtual Vector component_jacobian_transpose_apply(std::size_t i, const Vector& x, const Vector& w) const;

  virtual bool has_equilibrium() const { return false; }
  /// The unique zero of full_value. Throws Unsupported when no analytic route exists.
  virtual Vector equilibrium() const;

  /// True when the Jacobian does not depend on x.
  virtual bool is_affine() const { return false; }

  /// Uniform mean of the component values.
  virtual Vector full_value(const Vector& x) const;
  Matrix full_jacobian(const Vector& x) const;

 protected:
  void check_index(std::size_t i) const;
  void check_point(const Vector& x) const;
};

/// Data of one component of a two-player quadratic game.
struct GameComponent {
  Matrix A;  // d1 x d1, symmetric
  Matrix B;  // d1 x d2
  Matrix C;  // d2 x d2, symmetric
  Vector a;  // d1
  Vector c;  // d2
};

/// Quadratic min-max game
///   min_{x1} max_{x2} (1/n) sum_i  x1'A_i x1/2 + x1'B_i x2 - x2'C_i x2/2 + a_i'x1 - c_i'x2,
/// whose component operators are
///   xi_i(x) = (A_i x1 + B_i x2 + a_i ; -B_i' x1 + C_i x2 + c_i).
class QuadraticGame final : public FiniteSumOperator {
 public:
  explicit QuadraticGame(std::vector<GameComponent> components);

  std::size_t num_components() const override { return components_.size(); }
  std::size_t dim() const override { return d1_ + d2_; }
  std::size_t d1() const noexcept { return d1_; }
  std::size_t d2() const noexcept { return d2_; }

  Vector component_value(std::size_t i, const Vector& x) const override;
  Matrix component_jacobian(std::size_t i, const Vector& x) const override;
  Vector component_jacobian_transpose_apply(std::size_t i, const Vector& x, const Vector& w) const override;
  Vector full_value(const Vector& x) const override;

  bool has_equilibrium() const override { return solution_.has_value(); }
  /// Solves J x = -r. Throws Singular when the mean Jacobian is singular.
  Vector equilibrium() const override;
  bool is_affine() const override { return true; }

  const std::vector<GameComponent>& components() const noexcept { return components_; }
  /// Constant block Jacobian [[A_i, B_i], [-B_i', C_i]].
  const Matrix& jacobian(std::size_t i) const;
  /// Constant offset (a_i ; c_i).
  const Vector& offset(std::size_t i) const;
  const Matrix& mean_jacobian() const noexcept { return mean_jacobian_; }
  const Vector& mean_offset() const noexcept { return mean_offset_; }

 private:
  std::vector<GameComponent> components_;
  std::size_t d1_ = 0;
  std::size_t d2_ = 0;
  std::vector<Matrix> jacobians_;
  std::vector<Vector> offsets_;
  Matrix mean_jacobian_;
  Vector mean_offset_;
  std::optional<Vector> solution_;
};

/// Single-component operator xi(x) = x ((L - mu)/2 cos|x| + (L + mu)/2).
///
/// mu-quasi-strongly monotone and L-co-coercive around x* = 0, yet neither
/// monotone nor Lipschitz.
class CosineOperator final : public FiniteSumOperator {
 public:
  CosineOperator(std::size_t dim, double mu, double big_l);

  std::size_t num_components() const override { return 1; }
  std::size_t dim() const override { return dim_; }
  double mu() const noexcept { return mu_; }
  double big_l() const noexcept { return big_l_; }

  Vector component_value(std::size_t i, const Vector& x) const override;
  Matrix component_jacobian(std::size_t i, const Vector& x) const override;

  bool has_equilibrium() const override { return true; }
  Vector equilibrium() const override { return Vector::Zero(static_cast<Eigen::Index>(dim_)); }

 private:
  std::size_t dim_;
  double mu_;
  double big_l_;
};

}  // namespace svi
