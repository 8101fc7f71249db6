#pragma once

// Dense small-matrix substrate shared by every other module.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace svi {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;

/// Seeded pseudo-random source used by every stochastic operation.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The distributions are implemented here rather than taken from
/// <random> because the standard leaves their algorithms unspecified; with
/// these, the same seed yields the same draws on every conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random mantissa bits.
  double uniform();
  double uniform(double lo, double hi);

  /// Uniform integer in [0, bound). Rejection sampling, no modulo bias.
  std::size_t uniform_index(std::size_t bound);

  /// Standard normal via the Marsaglia polar method.
  double normal();
  Vector normal_vector(std::size_t dim);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Builds a rows x cols matrix from entries listed in row-major order.
Matrix from_row_major(std::size_t rows, std::size_t cols, std::span<const double> entries);
std::vector<double> to_row_major(const Matrix& m);

/// Eigenvalues of a symmetric matrix, ascending.
/// Throws NonSquare, or AsymmetryTooLarge when the relative asymmetry exceeds 1e-12.
std::vector<double> symmetric_eigenvalues(const Matrix& m);

/// All eigenvalues of a square real matrix with multiplicity. Complex pairs
/// come out as exact conjugates. Throws NonSquare or NoConvergence.
std::vector<Complex> general_spectrum(const Matrix& m);

/// Singular values, descending. One-sided Jacobi rotations, so small singular
/// values keep high relative accuracy.
std::vector<double> singular_values(const Matrix& m);

/// Solves m x = b. Throws NonSquare, DimensionMismatch, or Singular when the
/// reciprocal condition estimate drops below 1e-12.
Vector solve_linear(const Matrix& m, const Vector& b);

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the
/// column signs fixed so that R has a positive diagonal.
Matrix random_orthogonal(std::size_t dim, Rng& rng);

/// Symmetric part (M + M^T) / 2.
Matrix symmetric_part(const Matrix& m);

/// Largest absolute eigenvalue of a symmetric matrix.
double symmetric_spectral_norm(const Matrix& m);

}  // namespace svi
