#include "svi/sampling.hpp"

#include <algorithm>
#include <numeric>

#include "svi/error.hpp"

namespace svi {

SamplingScheme::SamplingScheme(SchemeKind kind, std::size_t n, std::size_t b, std::vector<double> p)
    : kind_(kind), n_(n), b_(b), p_(std::move(p)) {}

SamplingScheme SamplingScheme::minibatch(std::size_t n, std::size_t b) {
  if (n == 0 || b == 0 || b > n) {
    throw Error(ErrorCode::InvalidScheme,
                "minibatch needs 1 <= b <= n, got b=" + std::to_string(b) + ", n=" + std::to_string(n));
  }
  return SamplingScheme(SchemeKind::minibatch, n, b,
                        std::vector<double>(n, static_cast<double>(b) / static_cast<double>(n)));
}

SamplingScheme SamplingScheme::single_element(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidScheme, "single-element sampling needs n >= 1");
  return SamplingScheme(SchemeKind::single_element, n, 1, std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

SamplingScheme SamplingScheme::full_batch(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidScheme, "full-batch sampling needs n >= 1");
  return SamplingScheme(SchemeKind::full_batch, n, n, std::vector<double>(n, 1.0));
}

SamplingScheme SamplingScheme::independent(std::vector<double> probabilities) {
  if (probabilities.empty()) throw Error(ErrorCode::InvalidScheme, "independent sampling needs n >= 1");
  for (double p : probabilities) {
    // Every p_i > 0 keeps the sampling proper.
    if (!(p > 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidScheme, "inclusion probabilities must lie in (0, 1]");
  }
  const std::size_t n = probabilities.size();
  return SamplingScheme(SchemeKind::independent, n, 0, std::move(probabilities));
}

std::string SamplingScheme::name() const {
  switch (kind_) {
    case SchemeKind::minibatch: return "minibatch(b=" + std::to_string(b_) + ")";
    case SchemeKind::single_element: return "single";
    case SchemeKind::full_batch: return "full";
    case SchemeKind::independent: return "independent";
  }
  return "unknown";
}

double SamplingScheme::pair_inclusion(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_) throw Error(ErrorCode::IndexOutOfRange, "pair_inclusion index out of range");
  if (i == j) return p_[i];
  if (kind_ == SchemeKind::independent) return p_[i] * p_[j];
  const double n = static_cast<double>(n_);
  const double b = static_cast<double>(b_);
  return b / n * (b - 1.0) / (n - 1.0);
}

Vector SamplingVector::dense(std::size_t n) const {
  Vector out = Vector::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < indices.size(); ++k) out(static_cast<Eigen::Index>(indices[k])) = weights[k];
  return out;
}

namespace {

SamplingVector all_ones(std::size_t n) {
  SamplingVector v;
  v.indices.resize(n);
  std::iota(v.indices.begin(), v.indices.end(), std::size_t{0});
  v.weights.assign(n, 1.0);
  return v;
}

std::size_t binomial_saturating(std::size_t n, std::size_t k) {
  k = std::min(k, n - k);
  // C(n, i) for increasing i stays an integer at every step.
  unsigned __int128 acc = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > kMaxSupportSize) return kMaxSupportSize + 1;
  }
  return static_cast<std::size_t>(acc);
}

}  // namespace

SamplingVector draw(const SamplingScheme& scheme, Rng& rng) {
  const std::size_t n = scheme.n();
  switch (scheme.kind()) {
    case SchemeKind::full_batch:
      return all_ones(n);
    case SchemeKind::minibatch:
    case SchemeKind::single_element: {
      const std::size_t b = scheme.batch_size();
      if (b == n) return all_ones(n);
      // Partial Fisher-Yates: the first b slots end up a uniform b-subset.
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      for (std::size_t t = 0; t < b; ++t) {
        const std::size_t j = t + rng.uniform_index(n - t);
        std::swap(perm[t], perm[j]);
      }
      SamplingVector v;
      v.indices.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(b));
      std::sort(v.indices.begin(), v.indices.end());
      v.weights.assign(b, static_cast<double>(n) / static_cast<double>(b));
      return v;
    }
    case SchemeKind::independent: {
      SamplingVector v;
      const auto& p = scheme.probabilities();
      for (std::size_t i = 0; i < n; ++i) {
        if (rng.uniform() < p[i]) {
          v.indices.push_back(i);
          v.weights.push_back(1.0 / p[i]);
        }
      }
      return v;
    }
  }
  throw Error(ErrorCode::InvalidScheme, "unknown scheme kind");
}

std::size_t support_size(const SamplingScheme& scheme) {
  switch (scheme.kind()) {
    case SchemeKind::full_batch: return 1;
    case SchemeKind::minibatch:
    case SchemeKind::single_element: return binomial_saturating(scheme.n(), scheme.batch_size());
    case SchemeKind::independent: {
      if (scheme.n() >= 20) return kMaxSupportSize + 1;
      std::size_t count = 1;
      for (double p : scheme.probabilities()) count *= (p < 1.0 ? 2 : 1);
      return count;
    }
  }
  return kMaxSupportSize + 1;
}

std::vector<SupportEntry> enumerate_support(const SamplingScheme& scheme) {
  const std::size_t size = support_size(scheme);
  if (size > kMaxSupportSize) {
    throw Error(ErrorCode::SupportTooLarge, "support of " + scheme.name() + " exceeds " +
                                                std::to_string(kMaxSupportSize) + " entries");
  }
  const std::size_t n = scheme.n();
  std::vector<SupportEntry> out;
  out.reserve(size);
  switch (scheme.kind()) {
    case SchemeKind::full_batch:
      out.push_back({1.0, all_ones(n)});
      break;
    case SchemeKind::minibatch:
    case SchemeKind::single_element: {
      const std::size_t b = scheme.batch_size();
      const double prob = 1.0 / static_cast<double>(size);
      const double weight = static_cast<double>(n) / static_cast<double>(b);
      // Lexicographic walk over b-combinations of {0..n-1}.
      std::vector<std::size_t> comb(b);
      std::iota(comb.begin(), comb.end(), std::size_t{0});
      while (true) {
        out.push_back({prob, SamplingVector{comb, std::vector<double>(b, weight)}});
        std::size_t pos = b;
        while (pos > 0 && comb[pos - 1] == n - b + pos - 1) --pos;
        if (pos == 0) break;
        ++comb[pos - 1];
        for (std::size_t t = pos; t < b; ++t) comb[t] = comb[t - 1] + 1;
      }
      break;
    }
    case SchemeKind::independent: {
      const auto& p = scheme.probabilities();
      for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        double prob = 1.0;
        SamplingVector v;
        for (std::size_t i = 0; i < n; ++i) {
          if (mask & (std::size_t{1} << i)) {
            prob *= p[i];
            v.indices.push_back(i);
            v.weights.push_back(1.0 / p[i]);
          } else {
            prob *= 1.0 - p[i];
          }
        }
        if (prob > 0.0) out.push_back({prob, std::move(v)});
      }
      break;
    }
  }
  return out;
}

SchemeStats scheme_stats(const SamplingScheme& scheme) {
  SchemeStats stats;
  stats.inclusion = scheme.probabilities();
  const double n = static_cast<double>(scheme.n());
  switch (scheme.kind()) {
    case SchemeKind::full_batch:
      stats.z = 1.0;
      break;
    case SchemeKind::minibatch:
    case SchemeKind::single_element: {
      const double b = static_cast<double>(scheme.batch_size());
      stats.z = scheme.batch_size() == scheme.n() ? 1.0 : n / b * (b - 1.0) / (n - 1.0);
      break;
    }
    case SchemeKind::independent:
      // Prob(i,j in S) = p_i p_j, so the ratio is identically one.
      stats.z = 1.0;
      break;
  }
  return stats;
}

Vector sampled_value(const FiniteSumOperator& op, const SamplingVector& v, const Vector& x) {
  Vector sum = Vector::Zero(static_cast<Eigen::Index>(op.dim()));
  for (std::size_t k = 0; k < v.indices.size(); ++k) sum += v.weights[k] * op.component_value(v.indices[k], x);
  return sum / static_cast<double>(op.num_components());
}

Matrix sampled_jacobian(const FiniteSumOperator& op, const SamplingVector& v, const Vector& x) {
  const auto d = static_cast<Eigen::Index>(op.dim());
  Matrix sum = Matrix::Zero(d, d);
  for (std::size_t k = 0; k < v.indices.size(); ++k) sum += v.weights[k] * op.component_jacobian(v.indices[k], x);
  return sum / static_cast<double>(op.num_components());
}

Vector sampled_jacobian_transpose_apply(const FiniteSumOperator& op, const SamplingVector& v, const Vector& x,
                                        const Vector& w) {
  Vector sum = Vector::Zero(static_cast<Eigen::Index>(op.dim()));
  for (std::size_t k = 0; k < v.indices.size(); ++k) {
    sum += v.weights[k] * op.component_jacobian_transpose_apply(v.indices[k], x, w);
  }
  return sum / static_cast<double>(op.num_components());
}

SamplingScheme parse_scheme(const std::string& name, std::size_t n, std::optional<std::size_t> b) {
  if (name == "single" || name == "single_element") return SamplingScheme::single_element(n);
  if (name == "full" || name == "full_batch") return SamplingScheme::full_batch(n);
  if (name == "minibatch") {
    if (!b) throw Error(ErrorCode::InvalidScheme, "minibatch sampling needs a batch size");
    return SamplingScheme::minibatch(n, *b);
  }
  throw Error(ErrorCode::InvalidScheme, "unknown sampling scheme '" + name + "'");
}

}  // namespace svi
