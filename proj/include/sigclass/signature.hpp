#pragma once

#include <cstddef>
#include <vector>

#include "sigclass/path.hpp"

namespace sigclass {

// Truncated signature of a piecewise-linear path in an alphabet of size d,
// stored level by level. Level k is the dense d^k block of iterated
// integrals S^(i_1..i_k), indexed lexicographically with i_1 the most
// significant letter; level 0 is the constant 1. Flattened, the levels
// concatenate to a vector of length sig_dim(d, p).
//
// The two algebraic facts everything below relies on:
//   - a single linear segment with displacement D has level k equal to the
//     k-fold tensor power D^(x)k / k!,
//   - concatenating paths multiplies signatures in the truncated tensor
//     algebra (level k of the product is sum_j a_j (x) b_(k-j)).

inline constexpr std::size_t kDefaultFeatureBudget = 200000;

// Number of signature coefficients for alphabet size d truncated at order p:
// sum_{k=0}^{p} d^k. Throws std::invalid_argument for d < 1 or p < 0 and
// std::overflow_error when the count does not fit in std::size_t.
std::size_t sig_dim(int d, int p);

class GradedSignature {
 public:
  // Identity signature: level 0 is 1, all higher levels are 0.
  GradedSignature(int dim, int order);

  int dim() const { return dim_; }
  int order() const { return order_; }

  const std::vector<double>& level(int k) const { return levels_[static_cast<std::size_t>(k)]; }
  std::vector<double>& level(int k) { return levels_[static_cast<std::size_t>(k)]; }

  std::size_t flat_size() const;
  std::vector<double> flatten() const;

  // Euclidean norm of the flattened vector. For a path with total variation
  // L this never exceeds sum_k L^k / k! <= exp(L).
  double euclidean_norm() const;

  // Right-multiplication by the signature of a path traversed afterwards:
  // this <- this (x) other. Levels are updated top-down so every product
  // reads unmodified lower levels.
  void concat_inplace(const GradedSignature& other);

 private:
  int dim_;
  int order_;
  std::vector<std::vector<double>> levels_;
};

// Signature of one linear segment: level k = displacement^(x)k / k!.
// The displacement length fixes the alphabet size.
GradedSignature segment_signature(const std::vector<double>& displacement, int order);

// Chen product of two signatures over the same alphabet and order.
GradedSignature chen_concat(const GradedSignature& a, const GradedSignature& b);

// Signature of a piecewise-linear path: fold of segment signatures. Refuses
// combinations whose coefficient count exceeds feature_budget.
GradedSignature path_signature(const PiecewiseLinearPath& path, int order,
                               std::size_t feature_budget = kDefaultFeatureBudget);

inline GradedSignature signature(const AugmentedPath& path, int order,
                                 std::size_t feature_budget = kDefaultFeatureBudget) {
  return path_signature(path.path(), order, feature_budget);
}

// Letters (1-based) of the level-k word at a lexicographic block offset.
std::vector<int> word_at(int d, int level, std::size_t offset);

}  // namespace sigclass
