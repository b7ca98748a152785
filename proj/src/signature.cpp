#include "sigclass/signature.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sigclass {

std::size_t sig_dim(int d, int p) {
  if (d < 1) throw std::invalid_argument("sig_dim: alphabet size must be >= 1, got " + std::to_string(d));
  if (p < 0) throw std::invalid_argument("sig_dim: order must be >= 0, got " + std::to_string(p));
  const std::size_t max = std::numeric_limits<std::size_t>::max();
  std::size_t total = 1;  // level 0
  std::size_t level = 1;
  for (int k = 1; k <= p; ++k) {
    if (level > max / static_cast<std::size_t>(d))
      throw std::overflow_error("sig_dim: d^" + std::to_string(k) + " overflows for d=" + std::to_string(d));
    level *= static_cast<std::size_t>(d);
    if (total > max - level)
      throw std::overflow_error("sig_dim: coefficient count overflows for d=" + std::to_string(d) +
                                ", p=" + std::to_string(p));
    total += level;
  }
  return total;
}

GradedSignature::GradedSignature(int dim, int order) : dim_(dim), order_(order) {
  if (dim_ < 1) throw std::invalid_argument("GradedSignature: dim must be >= 1");
  if (order_ < 0) throw std::invalid_argument("GradedSignature: order must be >= 0");
  sig_dim(dim_, order_);  // overflow guard before allocating
  levels_.resize(static_cast<std::size_t>(order_) + 1);
  std::size_t size = 1;
  for (int k = 0; k <= order_; ++k) {
    levels_[static_cast<std::size_t>(k)].assign(size, 0.0);
    size *= static_cast<std::size_t>(dim_);
  }
  levels_[0][0] = 1.0;
}

std::size_t GradedSignature::flat_size() const {
  std::size_t n = 0;
  for (const auto& lv : levels_) n += lv.size();
  return n;
}

std::vector<double> GradedSignature::flatten() const {
  std::vector<double> out;
  out.reserve(flat_size());
  for (const auto& lv : levels_) out.insert(out.end(), lv.begin(), lv.end());
  return out;
}

double GradedSignature::euclidean_norm() const {
  double s2 = 0.0;
  for (const auto& lv : levels_)
    for (double v : lv) s2 += v * v;
  return std::sqrt(s2);
}

void GradedSignature::concat_inplace(const GradedSignature& other) {
  if (other.dim_ != dim_ || other.order_ != order_)
    throw std::invalid_argument("concat: signatures must share alphabet size and order");
  for (int lev = order_; lev >= 1; --lev) {
    auto& dest = levels_[static_cast<std::size_t>(lev)];
    // Cross terms a_j (x) b_(lev-j); levels_ below lev still hold a's values.
    for (int j = lev - 1; j >= 1; --j) {
      const auto& a = levels_[static_cast<std::size_t>(j)];
      const auto& b = other.levels_[static_cast<std::size_t>(lev - j)];
      std::size_t pos = 0;
      for (std::size_t ia = 0; ia < a.size(); ++ia) {
        const double av = a[ia];
        for (std::size_t ib = 0; ib < b.size(); ++ib, ++pos) dest[pos] += av * b[ib];
      }
    }
    const auto& b = other.levels_[static_cast<std::size_t>(lev)];
    for (std::size_t i = 0; i < b.size(); ++i) dest[i] += b[i];
  }
}

GradedSignature segment_signature(const std::vector<double>& displacement, int order) {
  const int d = static_cast<int>(displacement.size());
  if (d < 1) throw std::invalid_argument("segment_signature: displacement must have >= 1 coordinate");
  for (double v : displacement)
    if (!std::isfinite(v)) throw std::invalid_argument("segment_signature: non-finite displacement");
  GradedSignature sig(d, order);
  for (int k = 1; k <= order; ++k) {
    const auto& prev = sig.level(k - 1);
    auto& cur = sig.level(k);
    const double inv = 1.0 / static_cast<double>(k);
    std::size_t pos = 0;
    for (std::size_t i = 0; i < prev.size(); ++i) {
      const double pv = prev[i] * inv;
      for (int j = 0; j < d; ++j, ++pos) cur[pos] = pv * displacement[static_cast<std::size_t>(j)];
    }
  }
  return sig;
}

GradedSignature chen_concat(const GradedSignature& a, const GradedSignature& b) {
  GradedSignature out = a;
  out.concat_inplace(b);
  return out;
}

GradedSignature path_signature(const PiecewiseLinearPath& path, int order, std::size_t feature_budget) {
  const std::size_t n = sig_dim(path.dim(), order);
  if (n > feature_budget)
    throw std::invalid_argument("path_signature: sig_dim(" + std::to_string(path.dim()) + ", " +
                                std::to_string(order) + ") = " + std::to_string(n) +
                                " exceeds the feature budget of " + std::to_string(feature_budget));
  GradedSignature sig = segment_signature(path.displacement(0), order);
  for (std::size_t i = 1; i + 1 < path.num_vertices(); ++i)
    sig.concat_inplace(segment_signature(path.displacement(i), order));
  return sig;
}

std::vector<int> word_at(int d, int level, std::size_t offset) {
  if (d < 1 || level < 0) throw std::invalid_argument("word_at: bad alphabet or level");
  std::vector<int> letters(static_cast<std::size_t>(level));
  for (int k = level - 1; k >= 0; --k) {
    letters[static_cast<std::size_t>(k)] = static_cast<int>(offset % static_cast<std::size_t>(d)) + 1;
    offset /= static_cast<std::size_t>(d);
  }
  if (offset != 0) throw std::invalid_argument("word_at: offset out of range for level");
  return letters;
}

}  // namespace sigclass
