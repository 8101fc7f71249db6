#include "svi/operators.hpp"

#include <cmath>
#include <string>

#include "svi/error.hpp"

namespace svi {

Vector FiniteSumOperator::component_jacobian_transpose_apply(std::size_t i, const Vector& x,
                                                             const Vector& w) const {
  return component_jacobian(i, x).transpose() * w;
}

Vector FiniteSumOperator::equilibrium() const {
  throw Error(ErrorCode::Unsupported, "operator has no analytic equilibrium");
}

Vector FiniteSumOperator::full_value(const Vector& x) const {
  check_point(x);
  const std::size_t n = num_components();
  Vector sum = Vector::Zero(static_cast<Eigen::Index>(dim()));
  for (std::size_t i = 0; i < n; ++i) sum += component_value(i, x);
  return sum / static_cast<double>(n);
}

Matrix FiniteSumOperator::full_jacobian(const Vector& x) const {
  check_point(x);
  const std::size_t n = num_components();
  const auto d = static_cast<Eigen::Index>(dim());
  Matrix sum = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < n; ++i) sum += component_jacobian(i, x);
  return sum / static_cast<double>(n);
}

void FiniteSumOperator::check_index(std::size_t i) const {
  if (i >= num_components()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "component " + std::to_string(i) + " of " + std::to_string(num_components()));
  }
}

void FiniteSumOperator::check_point(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "point has dimension " + std::to_string(x.size()) + ", operator expects " + std::to_string(dim()));
  }
}

// QuadraticGame

namespace {

bool is_symmetric(const Matrix& m) {
  if (m.size() == 0) return true;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale;
}

}  // namespace

QuadraticGame::QuadraticGame(std::vector<GameComponent> components) : components_(std::move(components)) {
  if (components_.empty()) throw Error(ErrorCode::InvalidConfig, "a game needs at least one component");
  d1_ = static_cast<std::size_t>(components_.front().A.rows());
  d2_ = static_cast<std::size_t>(components_.front().C.rows());
  const auto e1 = static_cast<Eigen::Index>(d1_);
  const auto e2 = static_cast<Eigen::Index>(d2_);
  if (d1_ + d2_ == 0) throw Error(ErrorCode::InvalidConfig, "game has zero dimension");

  const auto n = components_.size();
  mean_jacobian_ = Matrix::Zero(e1 + e2, e1 + e2);
  mean_offset_ = Vector::Zero(e1 + e2);
  jacobians_.reserve(n);
  offsets_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& g = components_[i];
    if (g.A.rows() != e1 || g.A.cols() != e1 || g.B.rows() != e1 || g.B.cols() != e2 || g.C.rows() != e2 ||
        g.C.cols() != e2 || g.a.size() != e1 || g.c.size() != e2) {
      throw Error(ErrorCode::DimensionMismatch, "component " + std::to_string(i) + " has inconsistent shapes");
    }
    if (!is_symmetric(g.A) || !is_symmetric(g.C)) {
      throw Error(ErrorCode::AsymmetryTooLarge, "component " + std::to_string(i) + ": A and C must be symmetric");
    }
    Matrix j(e1 + e2, e1 + e2);
    j.topLeftCorner(e1, e1) = g.A;
    j.topRightCorner(e1, e2) = g.B;
    j.bottomLeftCorner(e2, e1) = -g.B.transpose();
    j.bottomRightCorner(e2, e2) = g.C;
    Vector r(e1 + e2);
    r.head(e1) = g.a;
    r.tail(e2) = g.c;
    mean_jacobian_ += j;
    mean_offset_ += r;
    jacobians_.push_back(std::move(j));
    offsets_.push_back(std::move(r));
  }
  mean_jacobian_ /= static_cast<double>(n);
  mean_offset_ /= static_cast<double>(n);

  try {
    solution_ = solve_linear(mean_jacobian_, Vector(-mean_offset_));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Singular) throw;
  }
}

Vector QuadraticGame::component_value(std::size_t i, const Vector& x) const {
  check_index(i);
  check_point(x);
  Vector out = offsets_[i];
  out.noalias() += jacobians_[i] * x;
  return out;
}

Matrix QuadraticGame::component_jacobian(std::size_t i, const Vector& x) const {
  check_index(i);
  check_point(x);
  return jacobians_[i];
}

Vector QuadraticGame::component_jacobian_transpose_apply(std::size_t i, const Vector& x, const Vector& w) const {
  check_index(i);
  check_point(x);
  check_point(w);
  Vector out(w.size());
  out.noalias() = jacobians_[i].transpose() * w;
  return out;
}

Vector QuadraticGame::full_value(const Vector& x) const {
  check_point(x);
  Vector out = mean_offset_;
  out.noalias() += mean_jacobian_ * x;
  return out;
}

Vector QuadraticGame::equilibrium() const {
  if (!solution_) throw Error(ErrorCode::Singular, "mean Jacobian is singular; the equilibrium is not unique");
  return *solution_;
}

const Matrix& QuadraticGame::jacobian(std::size_t i) const {
  check_index(i);
  return jacobians_[i];
}

const Vector& QuadraticGame::offset(std::size_t i) const {
  check_index(i);
  return offsets_[i];
}

// CosineOperator

CosineOperator::CosineOperator(std::size_t dim, double mu, double big_l) : dim_(dim), mu_(mu), big_l_(big_l) {
  if (dim == 0) throw Error(ErrorCode::InvalidConfig, "dimension must be positive");
  if (!(mu > 0.0) || !(big_l > mu)) throw Error(ErrorCode::InvalidRange, "need 0 < mu < L");
}

Vector CosineOperator::component_value(std::size_t i, const Vector& x) const {
  check_index(i);
  check_point(x);
  const double r = x.norm();
  return x * (0.5 * (big_l_ - mu_) * std::cos(r) + 0.5 * (big_l_ + mu_));
}

Matrix CosineOperator::component_jacobian(std::size_t i, const Vector& x) const {
  check_index(i);
  check_point(x);
  const double r = x.norm();
  const auto d = static_cast<Eigen::Index>(dim_);
  const double scale = 0.5 * (big_l_ - mu_) * std::cos(r) + 0.5 * (big_l_ + mu_);
  Matrix j = scale * Matrix::Identity(d, d);
  if (r > 0.0) {
    // d/dx of cos|x| is -sin|x| x / |x|.
    const double radial = -0.5 * (big_l_ - mu_) * std::sin(r) / r;
    j.noalias() += radial * x * x.transpose();
  }
  return j;
}

}  // namespace svi
