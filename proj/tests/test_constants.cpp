#include <doctest.h>

#include <cmath>
#include <numbers>

#include "svi/constants.hpp"
#include "svi/error.hpp"
#include "test_support.hpp"

using namespace svi;
using svi::test::error_code;
using svi::test::mat;

namespace {

GameConstants plug(std::vector<double> ell_i, double ell, double sigma1_sq, double mu = 1.0) {
  GameConstants gc;
  gc.mu = mu;
  gc.ell_i = std::move(ell_i);
  gc.ell = ell;
  gc.ell_max = *std::max_element(gc.ell_i.begin(), gc.ell_i.end());
  gc.sigma1_sq = sigma1_sq;
  return gc;
}

Matrix random_normal_matrix(std::size_t d, Rng& rng) {
  // Q blkdiag(2x2 rotation-scalings, scalars) Q' with positive real parts.
  Matrix block = Matrix::Zero(d, d);
  std::size_t k = 0;
  while (k < d) {
    const double re = rng.uniform(0.2, 3.0);
    if (k + 1 < d && rng.uniform() < 0.5) {
      const double im = rng.uniform(-3.0, 3.0);
      block(k, k) = re;
      block(k + 1, k + 1) = re;
      block(k, k + 1) = im;
      block(k + 1, k) = -im;
      k += 2;
    } else {
      block(k, k) = re;
      k += 1;
    }
  }
  const Matrix q = random_orthogonal(d, rng);
  return q * block * q.transpose();
}

}  // namespace

TEST_CASE("matrix_cocoercivity examples") {
  for (auto method : {CocoercivityMethod::spectral, CocoercivityMethod::exact, CocoercivityMethod::grid_oracle}) {
    CHECK(matrix_cocoercivity(Matrix::Identity(2, 2), method) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(matrix_cocoercivity(mat(2, 2, {1, 1, -1, 1}), method) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(error_code([&] { matrix_cocoercivity(mat(2, 2, {0, 1, -1, 0}), method); }) == ErrorCode::NotCocoercive);
  }
}

TEST_CASE("spectral and grid routes agree on normal matrices") {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t d = 2 + rng.uniform_index(4);
    const Matrix m = random_normal_matrix(d, rng);
    const double spectral = matrix_cocoercivity(m, CocoercivityMethod::spectral);
    const double grid = matrix_cocoercivity(m, CocoercivityMethod::grid_oracle);
    CHECK(std::abs(spectral - grid) <= 1e-3 * spectral);
    CHECK(matrix_cocoercivity(m, CocoercivityMethod::exact) == doctest::Approx(spectral).epsilon(1e-9));
  }
}

TEST_CASE("exact route matches the grid on non-normal matrices") {
  // Upper triangular with a large off-diagonal: spectral route only sees the diagonal.
  const Matrix m = mat(2, 2, {1, 1.5, 0, 1});
  const double spectral = matrix_cocoercivity(m, CocoercivityMethod::spectral);
  const double exact = matrix_cocoercivity(m, CocoercivityMethod::exact);
  const double grid = matrix_cocoercivity(m, CocoercivityMethod::grid_oracle);
  CHECK(spectral == doctest::Approx(1.0));
  CHECK(exact > 1.5);
  CHECK(std::abs(exact - grid) <= 1e-3 * exact);

  Rng rng(3);
  for (int trial = 0; trial < 8; ++trial) {
    const std::size_t d = 2 + rng.uniform_index(4);
    Matrix g(d, d);
    for (Eigen::Index i = 0; i < g.rows(); ++i)
      for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = rng.normal();
    const Matrix m2 = g + (1.0 + symmetric_spectral_norm(symmetric_part(g))) * Matrix::Identity(d, d);
    const double e = matrix_cocoercivity(m2, CocoercivityMethod::exact);
    const double o = matrix_cocoercivity(m2, CocoercivityMethod::grid_oracle);
    CHECK(std::abs(e - o) <= 1e-3 * e);
    CHECK(o <= e * (1.0 + 1e-9));
  }
}

TEST_CASE("cocoercivity with a null space") {
  // <x, Mx> vanishes only on null(M): still co-coercive.
  const Matrix m = mat(2, 2, {1, 0, 0, 0});
  CHECK(matrix_cocoercivity(m, CocoercivityMethod::exact) == doctest::Approx(1.0));
  // Indefinite symmetric part.
  CHECK(error_code([] { matrix_cocoercivity(mat(2, 2, {1, 0, 0, -1}), CocoercivityMethod::exact); }) ==
        ErrorCode::NotCocoercive);
}

TEST_CASE("game_constants examples") {
  const GameConstants gc = game_constants(svi::test::scalar_game(2.0, 0.0, 3.0, 1.0, 4.0));
  CHECK(gc.mu == doctest::Approx(2.0));
  CHECK(gc.sigma1_sq == doctest::Approx(0.0));
  CHECK(gc.ell == doctest::Approx(3.0));

  CHECK(error_code([] { game_constants(svi::test::scalar_game(0.0, 2.0, 0.0)); }) ==
        ErrorCode::NotStronglyMonotone);
  CHECK(error_code([] { game_constants(svi::test::scalar_game(0.0, 0.0, 0.0)); }) == ErrorCode::Singular);

  const QuadraticGame one = svi::test::small_game(1, 2, 2, 5);
  const GameComponent& c = one.components()[0];
  const QuadraticGame twice({c, c});
  const GameConstants tc = game_constants(twice);
  CHECK(tc.ell_i[0] == tc.ell_i[1]);
  CHECK(tc.ell == doctest::Approx(tc.ell_i[0]).epsilon(1e-12));
}

TEST_CASE("ec_constants closed forms") {
  const GameConstants gc = plug({5, 1, 1, 1}, 2.0, 6.0);
  const ECConstants half = ec_constants(gc, SamplingScheme::minibatch(4, 2));
  CHECK(half.ell_xi == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(half.sigma_sq == doctest::Approx(2.0).epsilon(1e-14));

  const ECConstants full = ec_constants(gc, SamplingScheme::full_batch(4));
  CHECK(full.ell_xi == doctest::Approx(2.0));
  CHECK(full.sigma_sq == 0.0);

  const ECConstants single = ec_constants(gc, SamplingScheme::single_element(4));
  CHECK(single.ell_xi == doctest::Approx(5.0));
  CHECK(single.sigma_sq == doctest::Approx(6.0));

  CHECK(with_condition_number(gc, half).kappa_G.value() == doctest::Approx(3.0));
  CHECK(error_code([&] { ec_constants(gc, SamplingScheme::minibatch(5, 2)); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("sigma^2 matches support enumeration") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const QuadraticGame g = svi::test::small_game(5, 2, 2, seed);
    const GameConstants gc = game_constants(g);
    std::vector<SamplingScheme> schemes{SamplingScheme::independent({0.3, 0.5, 0.7, 0.9, 0.4})};
    for (std::size_t b = 1; b <= 5; ++b) schemes.push_back(SamplingScheme::minibatch(5, b));
    for (const auto& s : schemes) {
      double enumerated = 0.0;
      for (const auto& e : enumerate_support(s))
        enumerated += e.probability * sampled_value(g, e.vector, gc.solution).squaredNorm();
      CHECK(svi::test::rel_diff(ec_constants(gc, s).sigma_sq, enumerated) <= 1e-10);
    }
  }
}

TEST_CASE("hamiltonian_constants examples") {
  const HamiltonianConstants bil = hamiltonian_constants(svi::test::scalar_game(0.0, 2.0, 0.0, 1.0, 1.0),
                                                         SamplingScheme::single_element(1));
  CHECK(bil.mu_H == doctest::Approx(4.0));
  CHECK(bil.L_H == doctest::Approx(4.0));
  CHECK(bil.calL_H == doctest::Approx(4.0));
  CHECK(bil.sigma_H_sq == doctest::Approx(0.0));

  const QuadraticGame g = svi::test::small_game(4, 2, 3, 9);
  const HamiltonianConstants full = hamiltonian_constants(g, SamplingScheme::full_batch(4));
  CHECK(full.sigma_H_sq == 0.0);
  CHECK(full.calL_H == full.L_H);
  CHECK(full.mu_H > 0.0);
  CHECK(full.mu_H <= full.L_H);

  const HamiltonianConstants single = hamiltonian_constants(g, SamplingScheme::single_element(4));
  CHECK(single.L_H <= single.calL_H);
  CHECK(error_code([&] { hamiltonian_constants(g, SamplingScheme::minibatch(4, 2)); }) ==
        ErrorCode::UnsupportedScheme);
}

TEST_CASE("sigma_H^2 matches a Monte-Carlo estimate") {
  const QuadraticGame g = svi::test::small_game(3, 2, 2, 14);
  const HamiltonianConstants hc = hamiltonian_constants(g, SamplingScheme::single_element(3));
  const Vector xs = g.equilibrium();
  Rng rng(99);
  const int draws = 1000000;
  double sum = 0.0, sq = 0.0;
  for (int t = 0; t < draws; ++t) {
    const std::size_t i = rng.uniform_index(3), j = rng.uniform_index(3);
    const Vector grad =
        0.5 * (g.jacobian(i).transpose() * g.component_value(j, xs) + g.jacobian(j).transpose() * g.component_value(i, xs));
    const double v = grad.squaredNorm();
    sum += v;
    sq += v * v;
  }
  const double mean = sum / draws;
  const double se = std::sqrt((sq / draws - mean * mean) / draws);
  CHECK(std::abs(mean - hc.sigma_H_sq) <= 3.0 * se);
}

TEST_CASE("optimal minibatch") {
  const GameConstants gc = plug(std::vector<double>(100, 1.0), 1.0, 100.0);
  GameConstants wide = gc;
  wide.ell_i[0] = 10.0;
  wide.ell_max = 10.0;
  // 2/(eps mu) = 1.
  const OptimalMinibatch ob = optimal_minibatch(wide, 2.0);
  CHECK(ob.b_star_real == doctest::Approx(100.0 * 91.0 / 190.0).epsilon(1e-12));
  CHECK((ob.b_star == 47 || ob.b_star == 48));
  CHECK(minibatch_total_complexity(wide, ob.b_star, 2.0) <=
        minibatch_total_complexity(wide, ob.b_star == 47 ? 48 : 47, 2.0));

  GameConstants quiet = wide;
  quiet.sigma1_sq = 5.0;
  CHECK(optimal_minibatch(quiet, 2.0).b_star == 1);

  GameConstants loud = wide;
  loud.sigma1_sq = 1e12;
  CHECK(optimal_minibatch(loud, 2.0).b_star_real == doctest::Approx(100.0).epsilon(1e-6));
}

TEST_CASE("theoretical_bound examples") {
  BoundParams p;
  p.mu = 1.0;
  p.ell_xi = 1.0;
  p.alpha = 0.5;
  p.sigma_sq = 0.0;
  CHECK(theoretical_bound(BoundKind::sgda_constant, p, 2, 1.0) == doctest::Approx(0.25).epsilon(1e-15));

  p.ell_xi = 4.0;
  p.alpha = 0.1;
  p.sigma_sq = 3.0;
  CHECK(theoretical_bound(BoundKind::sgda_constant, p, 0, 2.0) == doctest::Approx(2.0 + 2 * 0.1 * 3.0).epsilon(1e-15));
  p.alpha = 4.0 / p.ell_xi;
  CHECK(error_code([&] { theoretical_bound(BoundKind::sgda_constant, p, 3, 1.0); }) ==
        ErrorCode::StepSizeOutOfRange);

  BoundParams s;
  s.mu = 1.0;
  s.mu_H = 1.0;
  s.sigma_sq = 3.0;
  s.sigma_H_sq = 3.0;
  s.ell_xi = 8.0;
  s.calL_H = 8.0;
  CHECK(sco_switch_threshold(s.ell_xi, s.calL_H, s.mu, s.mu_H) == doctest::Approx(32.0));
  s.ell_xi = 16.0;
  s.calL_H = 2.0;
  CHECK(sco_switch_point(s.ell_xi, s.calL_H, s.mu, s.mu_H) == 64);
  const double expected = 0.25 + 4096.0 / (std::exp(2.0) * 9216.0);
  CHECK(theoretical_bound(BoundKind::sco_switching, s, 96, 1.0) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(expected == doctest::Approx(0.3101).epsilon(1e-4));
  CHECK(error_code([&] { theoretical_bound(BoundKind::sco_switching, s, 63, 1.0); }) == ErrorCode::SwitchNotReached);

  BoundParams sw;
  sw.mu = 1.0;
  sw.ell_xi = 10.0;
  sw.sigma_sq = 2.0;
  CHECK(sgda_switch_point(10.0, 1.0) == 40);
  CHECK(bound_start(BoundKind::sgda_switching, sw) == 40);
  const double v = theoretical_bound(BoundKind::sgda_switching, sw, 80, 1.0);
  CHECK(v == doctest::Approx(8 * 2.0 / 80.0 + 16 * 100.0 / (std::exp(2.0) * 6400.0)).epsilon(1e-14));
  CHECK(error_code([&] { theoretical_bound(BoundKind::sgda_switching, sw, 39, 1.0); }) ==
        ErrorCode::SwitchNotReached);
}

TEST_CASE("constant-step bound variants") {
  BoundParams p;
  p.mu = 0.5;
  p.ell_xi = 2.0;
  p.sigma_sq = 1.0;
  p.alpha = 0.4;  // above 1/(2 ell_xi), below 1/ell_xi
  CHECK(error_code([&] { theoretical_bound(BoundKind::sgda_constant, p, 1, 1.0); }) ==
        ErrorCode::StepSizeOutOfRange);
  const double rate = 1 - 2 * 0.4 * 0.5 * (1 - 0.4 * 2.0);
  const double plateau = 0.4 * 1.0 / (0.5 * (1 - 0.8));
  CHECK(theoretical_bound(BoundKind::sgda_constant_large_step, p, 3, 2.0) ==
        doctest::Approx(std::pow(rate, 3) * 2.0 + plateau).epsilon(1e-14));

  BoundParams h;
  h.mu = 1.0;
  h.ell_xi = 1.0;
  h.sigma_sq = 2.0;
  h.mu_H = 0.5;
  h.calL_H = 3.0;
  h.sigma_H_sq = 5.0;
  h.alpha = 0.25;
  h.gamma = 0.05;
  const double q = 0.05 * 0.5 + 0.25 * 1.0;
  CHECK(theoretical_bound(BoundKind::sco_constant, h, 4, 1.0) ==
        doctest::Approx(std::pow(1 - q, 4) + 4 * (0.0625 * 2.0 + 0.0025 * 5.0) / q).epsilon(1e-14));
  h.gamma = 0.1;
  CHECK(error_code([&] { theoretical_bound(BoundKind::sco_constant, h, 1, 1.0); }) == ErrorCode::StepSizeOutOfRange);

  h.alpha = 0.0;
  h.gamma = 1.0 / 6.0;
  CHECK(theoretical_bound(BoundKind::shgd_constant, h, 2, 1.0) ==
        doctest::Approx(std::pow(1 - 0.5 / 6.0, 2) + 2.0 / 6.0 * 5.0 / 0.5).epsilon(1e-14));
  h.alpha = 0.1;
  CHECK(error_code([&] { theoretical_bound(BoundKind::shgd_constant, h, 1, 1.0); }) == ErrorCode::StepSizeOutOfRange);
}
