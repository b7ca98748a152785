#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "sigclass/dataset.hpp"
#include "sigclass/logistic.hpp"
#include "sigclass/signature.hpp"

namespace sigclass {

// Truncation-order selection: fit the lasso at each candidate order, record
// the unpenalized training risk of the solution, and pick the smallest
// order minimizing risk + penalty with
//   penalty(p) = c_pen * sqrt(sig_dim(alphabet, p) * exp(q)) / n^rho.

struct PenaltySpec {
  double c_pen = 0.0;
  double rho = 0.4;
  int q = 0;         // scalar covariates entering the feature vector
  int n = 0;         // training sample count; 0 lets select_order fill it in
  int alphabet = 0;  // signature alphabet size; 0 lets select_order fill it in
};

double penalty(int p, const PenaltySpec& spec);

struct OrderRecord {
  int p = 0;
  double risk = 0.0;
  double penalty = 0.0;
  double criterion = 0.0;
  Eigen::VectorXd theta;
  StandardizationStats stats;
};

struct OrderSelectionTrace {
  std::vector<OrderRecord> records;
  int selected_p = 0;
};

struct SelectOptions {
  int p_max = -1;  // -1: grow until the criterion rose at two consecutive orders
  int p_hard_cap = 32;
  std::size_t feature_budget = kDefaultFeatureBudget;
  LassoOptions lasso;
};

// Index of the smallest entry, earliest on exact ties.
std::size_t argmin_first(const std::vector<double>& values);

OrderSelectionTrace select_order(const Dataset& train, double lambda, const PenaltySpec& spec,
                                 const SelectOptions& options = {});

// Location of the first largest single-step decrease of p_hat when scanning
// the grid in increasing order; the calibrated constant is twice that grid
// value. Throws when p_hat never reaches 0 on the grid (the grid is too
// small) or when p_hat never drops at all.
double first_sharp_drop(const std::vector<double>& c_grid, const std::vector<int>& p_hats);

struct SlopeTrace {
  std::vector<double> c_grid;
  std::vector<int> p_hats;
  double drop_at = 0.0;  // grid value of the first sharp drop
  double c_pen = 0.0;    // 2 * drop_at
};

// Calibrates c_pen by the doubling rule: risks are computed once per order
// (they do not depend on c_pen), p_hat is swept across the grid, and the
// result is twice the first sharp drop. The penalty q comes from the data,
// so the signature-only variant passes a drop_scalars view.
SlopeTrace slope_heuristic(const Dataset& train, double lambda, const std::vector<double>& c_grid,
                           double rho, const SelectOptions& options = {});

// Default calibration grid: 20 log-spaced values, spanning far enough up
// that p_hat reaches 0 on well-scaled problems.
std::vector<double> default_cpen_grid();

// Default lambda grid: 20 log-spaced values in [1e-4, 1].
std::vector<double> default_lambda_grid();

// Stratified k-fold cross-validation of lambda at fixed order 1, minimizing
// mean validation risk; ties break toward the larger lambda. The grid is
// deduplicated and sorted first. Standardization is fit per fold on the
// training side only.
double tune_lambda(const Dataset& train, int folds, std::vector<double> lambda_grid,
                   std::uint64_t seed, const LassoOptions& lasso = {});

}  // namespace sigclass
