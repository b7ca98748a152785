#include "sigclass/features.hpp"

#include <stdexcept>
#include <vector>

#include "sigclass/path.hpp"

namespace sigclass {

std::size_t signature_width(const Dataset& ds, int order) {
  if (ds.meta.num_channels == 0) {
    if (order != 0)
      throw std::invalid_argument("signature_width: a dataset without channels only supports order 0");
    return 1;
  }
  return sig_dim(alphabet_size(ds), order);
}

Eigen::MatrixXd signature_features(const Dataset& ds, int order, bool include_scalars,
                                   std::size_t feature_budget) {
  ds.validate();
  if (order < 0) throw std::invalid_argument("signature_features: order must be >= 0");
  const std::size_t sig_len = signature_width(ds, order);
  if (sig_len > feature_budget)
    throw std::invalid_argument("signature_features: sig_dim exceeds the feature budget of " +
                                std::to_string(feature_budget));
  const Eigen::Index q = include_scalars ? static_cast<Eigen::Index>(ds.meta.q) : 0;
  Eigen::MatrixXd X(static_cast<Eigen::Index>(ds.size()), static_cast<Eigen::Index>(sig_len) + q);

  for (std::size_t i = 0; i < ds.size(); ++i) {
    const Sample& s = ds.samples[i];
    const auto row = static_cast<Eigen::Index>(i);
    if (ds.meta.num_channels == 0) {
      X(row, 0) = 1.0;
    } else {
      const auto path = interpolate_path(s.channels, ds.meta.num_channels);
      const auto sig = signature(time_augment(path), order, feature_budget);
      const auto flat = sig.flatten();
      for (std::size_t c = 0; c < flat.size(); ++c) X(row, static_cast<Eigen::Index>(c)) = flat[c];
    }
    for (Eigen::Index j = 0; j < q; ++j) X(row, static_cast<Eigen::Index>(sig_len) + j) = s.scalars[j];
  }
  return X;
}

}  // namespace sigclass
