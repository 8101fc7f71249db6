#include <doctest.h>

#include <cmath>
#include <map>

#include "svi/error.hpp"
#include "svi/sampling.hpp"
#include "test_support.hpp"

using namespace svi;

TEST_CASE("draw shapes") {
  Rng rng(1);
  const SamplingVector full = draw(SamplingScheme::full_batch(5), rng);
  CHECK(full.indices.size() == 5);
  for (double w : full.weights) CHECK(w == 1.0);

  const SamplingVector single = draw(SamplingScheme::single_element(4), rng);
  REQUIRE(single.indices.size() == 1);
  CHECK(single.weights[0] == 4.0);
  CHECK(single.indices[0] < 4);

  const SamplingVector mb = draw(SamplingScheme::minibatch(10, 3), rng);
  REQUIRE(mb.indices.size() == 3);
  CHECK(std::is_sorted(mb.indices.begin(), mb.indices.end()));
  CHECK(std::adjacent_find(mb.indices.begin(), mb.indices.end()) == mb.indices.end());
  for (double w : mb.weights) CHECK(w == doctest::Approx(10.0 / 3.0));
}

TEST_CASE("minibatch draws are uniform over subsets") {
  Rng rng(7);
  const auto scheme = SamplingScheme::minibatch(3, 2);
  std::map<std::vector<std::size_t>, int> counts;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) ++counts[draw(scheme, rng).indices];
  CHECK(counts.size() == 3);
  const auto support = enumerate_support(scheme);
  for (const auto& e : support) {
    const double freq = counts[e.vector.indices] / static_cast<double>(draws);
    const double se = std::sqrt(e.probability * (1 - e.probability) / draws);
    CHECK(std::abs(freq - 1.0 / 3.0) <= 0.02);
    CHECK(std::abs(freq - e.probability) <= 3 * se);
  }
}

TEST_CASE("enumerate_support examples") {
  const auto mb = enumerate_support(SamplingScheme::minibatch(3, 2));
  REQUIRE(mb.size() == 3);
  for (const auto& e : mb) CHECK(e.probability == doctest::Approx(1.0 / 3.0));

  const auto single = enumerate_support(SamplingScheme::single_element(2));
  REQUIRE(single.size() == 2);
  CHECK(single[0].probability == 0.5);
  CHECK(single[0].vector.indices == std::vector<std::size_t>{0});
  CHECK(single[0].vector.weights == std::vector<double>{2.0});
  CHECK(single[1].vector.indices == std::vector<std::size_t>{1});

  CHECK_THROWS_WITH_AS(enumerate_support(SamplingScheme::minibatch(40, 20)), doctest::Contains("SupportTooLarge"),
                       Error);
  CHECK_THROWS_AS(enumerate_support(SamplingScheme::independent(std::vector<double>(25, 0.5))), Error);
}

TEST_CASE("support is unbiased and pair inclusion matches") {
  std::vector<SamplingScheme> schemes;
  for (std::size_t n = 1; n <= 7; ++n)
    for (std::size_t b = 1; b <= n; ++b) schemes.push_back(SamplingScheme::minibatch(n, b));
  schemes.push_back(SamplingScheme::full_batch(4));
  schemes.push_back(SamplingScheme::independent({0.2, 0.5, 1.0, 0.9}));
  for (const auto& s : schemes) {
    const auto support = enumerate_support(s);
    const std::size_t n = s.n();
    double total = 0.0;
    Vector mean = Vector::Zero(n);
    Matrix pair = Matrix::Zero(n, n);
    for (const auto& e : support) {
      total += e.probability;
      mean += e.probability * e.vector.dense(n);
      for (std::size_t i : e.vector.indices)
        for (std::size_t j : e.vector.indices) pair(i, j) += e.probability;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((mean - Vector::Ones(n)).cwiseAbs().maxCoeff() <= 1e-12);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(pair(i, j) - s.pair_inclusion(i, j)) <= 1e-12);
  }
}

TEST_CASE("scheme_stats examples") {
  const auto mb = scheme_stats(SamplingScheme::minibatch(4, 2));
  CHECK(mb.inclusion == std::vector<double>(4, 0.5));
  CHECK(*mb.z == doctest::Approx(2.0 / 3.0));
  CHECK(*scheme_stats(SamplingScheme::full_batch(3)).z == 1.0);
  const auto single = scheme_stats(SamplingScheme::single_element(5));
  CHECK(single.inclusion[0] == doctest::Approx(0.2));
  CHECK(*single.z == 0.0);
}

TEST_CASE("scheme construction and parsing") {
  CHECK_THROWS_AS(SamplingScheme::minibatch(3, 4), Error);
  CHECK_THROWS_AS(SamplingScheme::minibatch(3, 0), Error);
  CHECK_THROWS_AS(SamplingScheme::independent({0.5, 0.0}), Error);
  CHECK(parse_scheme("single", 4, std::nullopt).kind() == SchemeKind::single_element);
  CHECK(parse_scheme("minibatch", 4, 2).batch_size() == 2);
  CHECK_THROWS_AS(parse_scheme("minibatch", 4, std::nullopt), Error);
  CHECK_THROWS_WITH_AS(parse_scheme("importance", 4, std::nullopt), doctest::Contains("InvalidScheme"), Error);
}

TEST_CASE("sampled values are unbiased over the support") {
  const QuadraticGame g = svi::test::small_game(5, 2, 3, 3);
  Rng rng(5);
  for (const auto& s : {SamplingScheme::single_element(5), SamplingScheme::minibatch(5, 3),
                        SamplingScheme::independent({0.3, 0.6, 0.9, 1.0, 0.5})}) {
    const auto support = enumerate_support(s);
    for (int p = 0; p < 100; ++p) {
      const Vector x = 5.0 * rng.normal_vector(5);
      Vector mean = Vector::Zero(5);
      Matrix jmean = Matrix::Zero(5, 5);
      for (const auto& e : support) {
        mean += e.probability * sampled_value(g, e.vector, x);
        jmean += e.probability * sampled_jacobian(g, e.vector, x);
      }
      const Vector xi = g.full_value(x);
      CHECK((mean - xi).norm() <= 1e-12 * (1.0 + xi.norm()));
      CHECK((jmean - g.full_jacobian(x)).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}
