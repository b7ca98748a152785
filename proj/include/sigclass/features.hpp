#pragma once

#include <Eigen/Dense>
#include <cstddef>

#include "sigclass/dataset.hpp"
#include "sigclass/signature.hpp"

namespace sigclass {

// Feature assembly shared by selection, the harness and the CLI: each
// sample's channels are joined on the union of their observation times,
// time-augmented, and signed at the requested order; scalars are appended
// unchanged. Column 0 is the order-0 signature entry (always 1), so the
// matrix carries its own intercept.
//
// Column layout: sig_dim(alphabet, order) signature coefficients in level
// order, then the q scalars (when included).
Eigen::MatrixXd signature_features(const Dataset& ds, int order, bool include_scalars,
                                   std::size_t feature_budget = kDefaultFeatureBudget);

// Signature block length for this dataset at the given order.
std::size_t signature_width(const Dataset& ds, int order);

}  // namespace sigclass
