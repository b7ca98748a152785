#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "sigclass/baselines.hpp"
#include "sigclass/dataset.hpp"
#include "sigclass/selection.hpp"

namespace sigclass {

// The full model plus its ablations and the classical competitors:
//   pslr      — signature features and scalar covariates,
//   signature — signature features only (scalars dropped, penalty q = 0),
//   scalar    — logistic regression on the scalar covariates only,
//   bspline / fourier / fpca — per-channel basis coefficients plus scalars.
enum class ModelVariant { Pslr, Signature, Scalar, Bspline, Fourier, Fpca };

ModelVariant variant_from_string(const std::string& name);
std::string to_string(ModelVariant variant);

struct ModelConfig {
  ModelVariant variant = ModelVariant::Pslr;
  double lambda = -1.0;  // < 0: tune by cross-validation at order 1
  double c_pen = -1.0;   // < 0: calibrate by the slope heuristic
  double rho = 0.4;
  int p_max = -1;  // < 0: grow automatically
  int folds = 5;
  std::vector<double> lambda_grid;  // empty: default_lambda_grid()
  std::vector<double> cpen_grid;    // empty: default_cpen_grid()
  std::vector<int> k_grid;          // empty: default_k_grid(kind); baselines only
  int baseline_grid_size = 100;     // common grid for the basis methods
  std::size_t feature_budget = kDefaultFeatureBudget;
  LassoOptions lasso;
};

// Everything needed to predict on new data and to report how the fit was
// reached. The signature family fills theta/stats/trace; the basis variants
// fill `baseline` instead.
struct FittedModel {
  ModelVariant variant = ModelVariant::Pslr;
  double lambda = 0.0;
  double c_pen = 0.0;
  bool calibrated = false;  // c_pen came from the slope heuristic
  int p_hat = -1;           // selected order; -1 for basis variants

  OrderSelectionTrace trace;  // signature family
  SlopeTrace slope;           // only when calibrated
  StandardizationStats stats;
  Eigen::VectorXd theta;
  bool include_scalars = false;

  BaselineModel baseline;  // basis variants
};

// Fits the requested variant on training data only. Auto lambda runs
// tune_lambda on the variant's own feature view; auto c_pen runs the slope
// heuristic (signature family, except the scalar variant where no order is
// selected and c_pen is fixed at 0).
FittedModel fit_model(const Dataset& train, const ModelConfig& config, std::uint64_t seed);

std::vector<int> predict_model(const FittedModel& model, const Dataset& ds);

Metrics evaluate_model(const FittedModel& model, const Dataset& test);

// One labeled coefficient of a fitted model, on the standardized feature
// scale. Signature coordinates carry their level and word; scalar
// covariates are named z_1..z_q; basis coefficients are named by channel
// and basis index.
struct LabeledCoefficient {
  int index = 0;
  int level = -1;  // signature level, or -1 for scalar/basis entries
  std::string kind;  // "signature", "scalar", or "basis"
  std::string name;
  double value = 0.0;
};

std::vector<LabeledCoefficient> label_coefficients(const FittedModel& model, int num_channels);

}  // namespace sigclass
