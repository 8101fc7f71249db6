#include <doctest.h>

#include <cmath>
#include <numbers>

#include "svi/error.hpp"
#include "svi/operators.hpp"
#include "test_support.hpp"

using namespace svi;
using svi::test::mat;

namespace {

QuadraticGame example_game() { return svi::test::scalar_game(2.0, 1.0, 3.0, 1.0, -1.0); }

Matrix central_difference(const FiniteSumOperator& op, std::size_t i, const Vector& x) {
  const double h = 1e-5;
  Matrix j(x.size(), x.size());
  for (Eigen::Index c = 0; c < x.size(); ++c) {
    Vector up = x, down = x;
    up(c) += h;
    down(c) -= h;
    j.col(c) = (op.component_value(i, up) - op.component_value(i, down)) / (2 * h);
  }
  return j;
}

}  // namespace

TEST_CASE("quadratic game component value and jacobian") {
  const QuadraticGame g = example_game();
  const Vector v = g.component_value(0, Vector::Ones(2));
  CHECK(v(0) == 4.0);
  CHECK(v(1) == 1.0);
  CHECK(g.component_jacobian(0, Vector::Zero(2)) == mat(2, 2, {2, 1, -1, 3}));
  CHECK(g.full_value(Vector::Ones(2)) == v);
  CHECK_THROWS_WITH_AS(g.component_value(1, Vector::Ones(2)), doctest::Contains("IndexOutOfRange"), Error);
  CHECK_THROWS_WITH_AS(g.component_value(0, Vector::Ones(3)), doctest::Contains("DimensionMismatch"), Error);
}

TEST_CASE("quadratic game equilibrium") {
  const QuadraticGame g = example_game();
  const Vector x = g.equilibrium();
  CHECK(x(0) == doctest::Approx(-4.0 / 7.0).epsilon(1e-14));
  CHECK(x(1) == doctest::Approx(1.0 / 7.0).epsilon(1e-14));
  CHECK(g.full_value(x).norm() <= 1e-12);

  const QuadraticGame homogeneous = svi::test::scalar_game(1.0, 2.0, 1.0);
  CHECK(homogeneous.equilibrium() == Vector::Zero(2));

  const QuadraticGame singular = svi::test::scalar_game(0.0, 0.0, 0.0);
  CHECK_FALSE(singular.has_equilibrium());
  CHECK_THROWS_WITH_AS(singular.equilibrium(), doctest::Contains("Singular"), Error);
}

TEST_CASE("generated games: equilibrium residual and monotonicity identity") {
  Rng rng(4);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const QuadraticGame g = svi::test::small_game(4, 3, 2, seed);
    const Vector x = g.equilibrium();
    CHECK(g.full_value(x).norm() <= 1e-9 * (1.0 + x.norm()));
    const Matrix sym = 0.5 * (g.mean_jacobian() + g.mean_jacobian().transpose());
    const double lmin = symmetric_eigenvalues(sym).front();
    for (int p = 0; p < 100; ++p) {
      const Vector a = rng.normal_vector(5), b = rng.normal_vector(5);
      const double inner = (g.full_value(a) - g.full_value(b)).dot(a - b);
      CHECK(inner == doctest::Approx((a - b).dot(sym * (a - b))).epsilon(1e-10));
      CHECK(inner >= lmin * (a - b).squaredNorm() - 1e-10);
    }
  }
}

TEST_CASE("jacobians match finite differences and average to the full jacobian") {
  const QuadraticGame g = svi::test::small_game(3, 2, 2, 77);
  Rng rng(2);
  const Vector x = rng.normal_vector(4);
  Matrix mean = Matrix::Zero(4, 4);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK((g.component_jacobian(i, x) - central_difference(g, i, x)).cwiseAbs().maxCoeff() <= 1e-5);
    mean += g.component_jacobian(i, x) / 3.0;
    const Vector w = rng.normal_vector(4);
    CHECK((g.component_jacobian_transpose_apply(i, x, w) - g.component_jacobian(i, x).transpose() * w).norm() <=
          1e-12);
  }
  CHECK((mean - g.full_jacobian(x)).cwiseAbs().maxCoeff() <= 1e-12);

  const CosineOperator cos_op(3, 1.0, 4.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector y = 3.0 * rng.normal_vector(3);
    CHECK((cos_op.component_jacobian(0, y) - central_difference(cos_op, 0, y)).cwiseAbs().maxCoeff() <= 1e-5);
  }
}

TEST_CASE("quadratic game validation") {
  GameComponent c;
  c.A = mat(1, 1, {1});
  c.B = mat(1, 1, {0});
  c.C = mat(1, 1, {1});
  c.a = Vector::Zero(1);
  c.c = Vector::Zero(2);
  CHECK_THROWS_WITH_AS(QuadraticGame({c}), doctest::Contains("DimensionMismatch"), Error);
  c.c = Vector::Zero(1);
  c.A = mat(1, 1, {1});
  GameComponent bad = c;
  bad.A = Matrix::Zero(2, 2);
  bad.A(0, 1) = 1.0;
  bad.B = Matrix::Zero(2, 1);
  bad.a = Vector::Zero(2);
  CHECK_THROWS_WITH_AS(QuadraticGame({bad}), doctest::Contains("AsymmetryTooLarge"), Error);
  CHECK_THROWS_AS(QuadraticGame(std::vector<GameComponent>{}), Error);
}

TEST_CASE("cancelling components give a zero operator") {
  GameComponent plus{mat(1, 1, {1}), mat(1, 1, {0}), mat(1, 1, {1}), Vector::Zero(1), Vector::Zero(1)};
  GameComponent minus{mat(1, 1, {-1}), mat(1, 1, {0}), mat(1, 1, {-1}), Vector::Zero(1), Vector::Zero(1)};
  const QuadraticGame g({plus, minus});
  CHECK(g.full_value((Vector(2) << 3, -5).finished()) == Vector::Zero(2));
}

TEST_CASE("cosine operator values and fixture properties") {
  const CosineOperator op(1, 1.0, 4.0);
  const double pi = std::numbers::pi;
  CHECK(op.component_value(0, Vector::Constant(1, pi))(0) == doctest::Approx(pi).epsilon(1e-14));
  CHECK(op.equilibrium() == Vector::Zero(1));
  CHECK_THROWS_AS(CosineOperator(2, 4.0, 1.0), Error);

  const CosineOperator op3(3, 1.0, 4.0);
  Rng rng(12);
  for (int p = 0; p < 10000; ++p) {
    Vector x = rng.normal_vector(3);
    x *= 100.0 * rng.uniform() / x.norm();
    const Vector xi = op3.full_value(x);
    const double inner = xi.dot(x);
    CHECK(inner >= 1.0 * x.squaredNorm() - 1e-9 * (1.0 + x.squaredNorm()));
    CHECK(xi.squaredNorm() <= 4.0 * inner + 1e-9 * (1.0 + xi.squaredNorm()));
  }
}
