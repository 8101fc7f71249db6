#include "svi/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "svi/error.hpp"

namespace svi {

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::size_t Rng::uniform_index(std::size_t bound) {
  if (bound == 0) throw Error(ErrorCode::InvalidRange, "uniform_index bound must be positive");
  const std::uint64_t b = bound;
  // Largest multiple of b representable; draws at or above it are rejected.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % b);
  std::uint64_t r = engine_();
  while (r >= limit) r = engine_();
  return static_cast<std::size_t>(r % b);
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  has_spare_ = true;
  return u * factor;
}

Vector Rng::normal_vector(std::size_t dim) {
  Vector out(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = normal();
  return out;
}

Matrix from_row_major(std::size_t rows, std::size_t cols, std::span<const double> entries) {
  if (entries.size() != rows * cols) {
    throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(rows * cols) + " entries, got " +
                                                  std::to_string(entries.size()));
  }
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double value = entries[r * cols + c];
      if (!std::isfinite(value)) throw Error(ErrorCode::InvalidConfig, "matrix entries must be finite");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = value;
    }
  }
  return m;
}

std::vector<double> to_row_major(const Matrix& m) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
  }
  return out;
}

namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::NonSquare, std::string(what) + ": matrix is " + std::to_string(m.rows()) + "x" +
                                          std::to_string(m.cols()));
  }
}

}  // namespace

std::vector<double> symmetric_eigenvalues(const Matrix& m) {
  require_square(m, "symmetric_eigenvalues");
  if (m.size() == 0) return {};
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) throw Error(ErrorCode::AsymmetryTooLarge, "asymmetry " + std::to_string(asym));
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetric_part(m), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "symmetric eigensolver failed");
  std::vector<double> out(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Complex> general_spectrum(const Matrix& m) {
  require_square(m, "general_spectrum");
  if (m.size() == 0) return {};
  Eigen::EigenSolver<Matrix> solver(m, false);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "QR iteration did not converge");
  const auto& ev = solver.eigenvalues();
  return std::vector<Complex>(ev.data(), ev.data() + ev.size());
}

std::vector<double> singular_values(const Matrix& m) {
  Matrix a = m.rows() >= m.cols() ? m : Matrix(m.transpose());
  const Eigen::Index cols = a.cols();
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int sweep = 0; sweep < 80; ++sweep) {
    bool rotated = false;
    for (Eigen::Index p = 0; p + 1 < cols; ++p) {
      for (Eigen::Index q = p + 1; q < cols; ++q) {
        const double alpha = a.col(p).squaredNorm();
        const double beta = a.col(q).squaredNorm();
        const double gamma = a.col(p).dot(a.col(q));
        if (gamma == 0.0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        Vector ap = a.col(p);
        a.col(p) = c * ap - s * a.col(q);
        a.col(q) = s * ap + c * a.col(q);
      }
    }
    if (!rotated) break;
  }
  std::vector<double> out(static_cast<std::size_t>(cols));
  for (Eigen::Index j = 0; j < cols; ++j) out[static_cast<std::size_t>(j)] = a.col(j).norm();
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

Vector solve_linear(const Matrix& m, const Vector& b) {
  require_square(m, "solve_linear");
  if (b.size() != m.rows()) throw Error(ErrorCode::DimensionMismatch, "right-hand side length mismatch");
  if (m.size() == 0) return Vector(0);
  Eigen::PartialPivLU<Matrix> lu(m);
  const double rcond = lu.rcond();
  if (!(rcond >= 1e-12)) throw Error(ErrorCode::Singular, "reciprocal condition estimate " + std::to_string(rcond));
  Vector x = lu.solve(b);
  // One step of iterative refinement.
  const Vector residual = b - m * x;
  x += lu.solve(residual);
  return x;
}

Matrix random_orthogonal(std::size_t dim, Rng& rng) {
  if (dim == 0) throw Error(ErrorCode::InvalidRange, "random_orthogonal needs dim >= 1");
  const auto d = static_cast<Eigen::Index>(dim);
  Matrix z(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) z(r, c) = rng.normal();
  }
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  const Matrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < d; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

Matrix symmetric_part(const Matrix& m) { return 0.5 * (m + m.transpose()); }

double symmetric_spectral_norm(const Matrix& m) {
  const auto ev = symmetric_eigenvalues(m);
  if (ev.empty()) return 0.0;
  return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

}  // namespace svi
