#pragma once

#include <cmath>
#include <vector>

#include <optional>

#include "svi/error.hpp"
#include "svi/experiments.hpp"
#include "svi/numerics.hpp"
#include "svi/operators.hpp"

namespace svi::test {

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

/// Small generated game for tests that need enumeration.
inline QuadraticGame small_game(std::size_t n, std::size_t d1, std::size_t d2, std::uint64_t seed, double L_B = 2.0) {
  GameGenConfig cfg;
  cfg.n = n;
  cfg.d1 = d1;
  cfg.d2 = d2;
  cfg.L_B = L_B;
  cfg.seed = seed;
  return generate_game(cfg);
}

inline QuadraticGame scalar_game(double a, double b, double c, double ra = 0.0, double rc = 0.0) {
  GameComponent g;
  g.A = Matrix::Constant(1, 1, a);
  g.B = Matrix::Constant(1, 1, b);
  g.C = Matrix::Constant(1, 1, c);
  g.a = Vector::Constant(1, ra);
  g.c = Vector::Constant(1, rc);
  return QuadraticGame({g});
}

inline Matrix mat(std::size_t r, std::size_t c, std::vector<double> rows) { return from_row_major(r, c, rows); }

}  // namespace svi::test

namespace svi::test {

/// Code of the svi::Error thrown by f, or nullopt when nothing is thrown.
template <class F>
std::optional<ErrorCode> error_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace svi::test
