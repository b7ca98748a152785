#include "sigclass/model.hpp"

#include <stdexcept>

#include "sigclass/features.hpp"
#include "sigclass/signature.hpp"
#include "sigclass/synth.hpp"

namespace sigclass {

ModelVariant variant_from_string(const std::string& name) {
  if (name == "pslr") return ModelVariant::Pslr;
  if (name == "signature") return ModelVariant::Signature;
  if (name == "scalar") return ModelVariant::Scalar;
  if (name == "bspline") return ModelVariant::Bspline;
  if (name == "fourier") return ModelVariant::Fourier;
  if (name == "fpca") return ModelVariant::Fpca;
  throw std::invalid_argument("unknown model variant: " + name);
}

std::string to_string(ModelVariant variant) {
  switch (variant) {
    case ModelVariant::Pslr: return "pslr";
    case ModelVariant::Signature: return "signature";
    case ModelVariant::Scalar: return "scalar";
    case ModelVariant::Bspline: return "bspline";
    case ModelVariant::Fourier: return "fourier";
    case ModelVariant::Fpca: return "fpca";
  }
  throw std::logic_error("unreachable");
}

namespace {

bool is_basis_variant(ModelVariant v) {
  return v == ModelVariant::Bspline || v == ModelVariant::Fourier || v == ModelVariant::Fpca;
}

BaselineKind kind_of(ModelVariant v) {
  switch (v) {
    case ModelVariant::Bspline: return BaselineKind::Bspline;
    case ModelVariant::Fourier: return BaselineKind::Fourier;
    case ModelVariant::Fpca: return BaselineKind::Fpca;
    default: throw std::logic_error("kind_of: not a basis variant");
  }
}

// Seed substream indices for the stages that draw randomness.
constexpr std::uint64_t kLambdaStream = 1;
constexpr std::uint64_t kBaselineStream = 2;

}  // namespace

FittedModel fit_model(const Dataset& train, const ModelConfig& config, std::uint64_t seed) {
  train.validate();
  if (config.variant == ModelVariant::Scalar && train.meta.q == 0)
    throw std::invalid_argument("fit_model: the scalar variant needs scalar covariates");
  if (config.variant != ModelVariant::Scalar && train.meta.num_channels == 0)
    throw std::invalid_argument("fit_model: this variant needs functional channels");

  FittedModel model;
  model.variant = config.variant;

  // The ablations run the shared pipeline on a reduced view of the data;
  // lambda is tuned on that same view so every stage sees one feature set.
  const Dataset* view = &train;
  Dataset reduced;
  if (config.variant == ModelVariant::Signature && train.meta.q > 0) {
    reduced = drop_scalars(train);
    view = &reduced;
  } else if (config.variant == ModelVariant::Scalar) {
    reduced = drop_channels(train);
    view = &reduced;
  }

  model.lambda = config.lambda;
  if (model.lambda < 0.0) {
    const auto grid = config.lambda_grid.empty() ? default_lambda_grid() : config.lambda_grid;
    model.lambda = tune_lambda(*view, config.folds, grid, derive_seed(seed, kLambdaStream),
                               config.lasso);
  }

  if (is_basis_variant(config.variant)) {
    const BaselineKind kind = kind_of(config.variant);
    const auto k_grid = config.k_grid.empty() ? default_k_grid(kind) : config.k_grid;
    model.baseline = fit_baseline(kind, train, k_grid, config.folds, model.lambda,
                                  derive_seed(seed, kBaselineStream),
                                  uniform_grid(config.baseline_grid_size), config.lasso);
    model.c_pen = 0.0;
    return model;
  }

  SelectOptions opts;
  opts.p_max = config.variant == ModelVariant::Scalar ? 0 : config.p_max;
  opts.feature_budget = config.feature_budget;
  opts.lasso = config.lasso;

  model.c_pen = config.c_pen;
  if (config.variant == ModelVariant::Scalar) {
    model.c_pen = 0.0;
  } else if (model.c_pen < 0.0) {
    const auto grid = config.cpen_grid.empty() ? default_cpen_grid() : config.cpen_grid;
    model.slope = slope_heuristic(*view, model.lambda, grid, config.rho, opts);
    model.c_pen = model.slope.c_pen;
    model.calibrated = true;
  }

  PenaltySpec spec;
  spec.c_pen = model.c_pen;
  spec.rho = config.rho;
  model.trace = select_order(*view, model.lambda, spec, opts);
  model.p_hat = model.trace.selected_p;

  const auto& winner = model.trace.records[static_cast<std::size_t>(model.p_hat)];
  model.theta = winner.theta;
  model.stats = winner.stats;
  model.include_scalars = view->meta.q > 0;
  return model;
}

std::vector<int> predict_model(const FittedModel& model, const Dataset& ds) {
  if (is_basis_variant(model.variant)) return baseline_predict(model.baseline, ds);

  // The scalar variant is order 0 with scalars appended ([1, z]); the
  // signature variant simply ignores scalars, so no view is needed here.
  const int order = model.variant == ModelVariant::Scalar ? 0 : model.p_hat;
  const bool scalars = model.variant == ModelVariant::Scalar || model.include_scalars;
  const Eigen::MatrixXd X = signature_features(ds, order, scalars);
  if (X.cols() != model.theta.size())
    throw std::invalid_argument("predict_model: feature width " + std::to_string(X.cols()) +
                                " does not match the fitted model (" +
                                std::to_string(model.theta.size()) + ")");
  return predict_labels(model.theta, standardize_apply(X, model.stats));
}

Metrics evaluate_model(const FittedModel& model, const Dataset& test) {
  return binary_metrics(labels_of(test), predict_model(model, test));
}

namespace {

std::string word_name(int alphabet, int level, std::size_t offset) {
  const auto letters = word_at(alphabet, level, offset);
  std::string name = "S(";
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (i > 0) name += ",";
    name += std::to_string(letters[i]);
  }
  return name + ")";
}

}  // namespace

std::vector<LabeledCoefficient> label_coefficients(const FittedModel& model, int num_channels) {
  std::vector<LabeledCoefficient> out;
  int index = 0;
  auto push = [&](int level, const std::string& kind, const std::string& name, double value) {
    LabeledCoefficient c;
    c.index = index++;
    c.level = level;
    c.kind = kind;
    c.name = name;
    c.value = value;
    out.push_back(std::move(c));
  };

  if (is_basis_variant(model.variant)) {
    const auto& b = model.baseline;
    const char* stem = model.variant == ModelVariant::Fpca ? "pc" : "b";
    const auto total = b.theta.size();
    const Eigen::Index width = static_cast<Eigen::Index>(num_channels) * b.k;
    for (Eigen::Index i = 0; i < width; ++i)
      push(-1, "basis",
           "ch" + std::to_string(i / b.k) + "_" + stem + std::to_string(i % b.k),
           b.theta[i]);
    for (Eigen::Index i = width; i < total; ++i)
      push(-1, "scalar", "z_" + std::to_string(i - width + 1), b.theta[i]);
    return out;
  }

  const int alphabet = model.variant == ModelVariant::Scalar ? 1 : num_channels + 1;
  const int order = model.variant == ModelVariant::Scalar ? 0 : model.p_hat;
  Eigen::Index i = 0;
  for (int level = 0; level <= order; ++level) {
    std::size_t level_size = 1;
    for (int k = 0; k < level; ++k) level_size *= static_cast<std::size_t>(alphabet);
    for (std::size_t off = 0; off < level_size; ++off, ++i)
      push(level, "signature", word_name(alphabet, level, off), model.theta[i]);
  }
  for (int j = 1; i < model.theta.size(); ++i, ++j)
    push(-1, "scalar", "z_" + std::to_string(j), model.theta[i]);
  return out;
}

}  // namespace sigclass
