#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "svi/numerics.hpp"
#include "svi/operators.hpp"

namespace svi {

enum class SchemeKind { minibatch, single_element, full_batch, independent };

/// A distribution over sampling vectors v with E[v_i] = 1 for every i.
class SamplingScheme {
 public:
  /// Uniform b-subsets, each selected index weighted n/b.
  static SamplingScheme minibatch(std::size_t n, std::size_t b);
  /// Minibatch with b = 1.
  static SamplingScheme single_element(std::size_t n);
  /// v = (1, ..., 1) with probability one.
  static SamplingScheme full_batch(std::size_t n);
  /// Index i included independently with probability p_i, weighted 1/p_i.
  static SamplingScheme independent(std::vector<double> probabilities);

  SchemeKind kind() const noexcept { return kind_; }
  std::size_t n() const noexcept { return n_; }
  /// Subset size for the uniform-subset kinds (n for full batch). Zero for independent.
  std::size_t batch_size() const noexcept { return b_; }
  const std::vector<double>& probabilities() const noexcept { return p_; }
  std::string name() const;

  /// Probability that both i and j are selected (i == j gives p_i).
  double pair_inclusion(std::size_t i, std::size_t j) const;

 private:
  SamplingScheme(SchemeKind kind, std::size_t n, std::size_t b, std::vector<double> p);

  SchemeKind kind_;
  std::size_t n_;
  std::size_t b_;
  std::vector<double> p_;
};

/// Sparse sampling vector: selected indices (ascending) and their weights.
/// Unselected coordinates are zero.
struct SamplingVector {
  std::vector<std::size_t> indices;
  std::vector<double> weights;

  Vector dense(std::size_t n) const;
};

struct SupportEntry {
  double probability;
  SamplingVector vector;
};

struct SchemeStats {
  std::vector<double> inclusion;  // p_i = Prob(i in S)
  std::optional<double> z;        // Prob(i,j in S) / (p_i p_j) when constant over i != j
};

inline constexpr std::size_t kMaxSupportSize = 1'000'000;

SamplingVector draw(const SamplingScheme& scheme, Rng& rng);

/// Every sampling vector with positive probability. Throws SupportTooLarge
/// past kMaxSupportSize entries.
std::vector<SupportEntry> enumerate_support(const SamplingScheme& scheme);

/// Number of support entries without building them (saturates at kMaxSupportSize + 1).
std::size_t support_size(const SamplingScheme& scheme);

SchemeStats scheme_stats(const SamplingScheme& scheme);

/// xi_v(x) = (1/n) sum_i v_i xi_i(x).
Vector sampled_value(const FiniteSumOperator& op, const SamplingVector& v, const Vector& x);

/// J_v(x) = (1/n) sum_i v_i J_i(x).
Matrix sampled_jacobian(const FiniteSumOperator& op, const SamplingVector& v, const Vector& x);

/// J_v(x)^T w without forming J_v.
Vector sampled_jacobian_transpose_apply(const FiniteSumOperator& op, const SamplingVector& v, const Vector& x,
                                        const Vector& w);

/// Parses "minibatch" (needs b), "single", "full". Throws InvalidScheme.
SamplingScheme parse_scheme(const std::string& name, std::size_t n, std::optional<std::size_t> b);

}  // namespace svi
