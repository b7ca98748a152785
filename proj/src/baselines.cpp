#include "sigclass/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

namespace sigclass {

BaselineKind baseline_kind_from_string(const std::string& name) {
  if (name == "bspline") return BaselineKind::Bspline;
  if (name == "fourier") return BaselineKind::Fourier;
  if (name == "fpca") return BaselineKind::Fpca;
  throw std::invalid_argument("unknown baseline kind: " + name);
}

std::string to_string(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::Bspline: return "bspline";
    case BaselineKind::Fourier: return "fourier";
    case BaselineKind::Fpca: return "fpca";
  }
  throw std::logic_error("unreachable");
}

Eigen::VectorXd channel_on_grid(const ChannelSeries& ch, const std::vector<double>& grid) {
  ch.validate();
  Eigen::VectorXd out(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    double v = 0.0;
    if (t <= ch.times.front()) {
      v = ch.values.front();
    } else if (t >= ch.times.back()) {
      v = ch.values.back();
    } else {
      const auto it = std::upper_bound(ch.times.begin(), ch.times.end(), t);
      const std::size_t hi = static_cast<std::size_t>(it - ch.times.begin());
      const std::size_t lo = hi - 1;
      const double w = (t - ch.times[lo]) / (ch.times[hi] - ch.times[lo]);
      v = ch.values[lo] + w * (ch.values[hi] - ch.values[lo]);
    }
    out[static_cast<Eigen::Index>(i)] = v;
  }
  return out;
}

BsplineBasis::BsplineBasis(int k) : k_(k) {
  if (k_ < 4) throw std::invalid_argument("BsplineBasis: cubic splines need k >= 4");
  // Open uniform knot vector on [0, 1]: 4-fold end knots, uniform interior.
  knots_.assign(4, 0.0);
  for (int i = 1; i <= k_ - 4; ++i)
    knots_.push_back(static_cast<double>(i) / static_cast<double>(k_ - 3));
  knots_.insert(knots_.end(), 4, 1.0);
}

Eigen::VectorXd BsplineBasis::evaluate_all(double t) const {
  t = std::clamp(t, 0.0, 1.0);
  const std::size_t m = knots_.size();
  std::vector<double> N(m - 1, 0.0);
  if (t == 1.0) {
    // Half-open intervals miss the right endpoint; the last non-degenerate
    // interval owns it.
    for (std::size_t i = m - 1; i-- > 0;) {
      if (knots_[i] < knots_[i + 1]) {
        N[i] = 1.0;
        break;
      }
    }
  } else {
    for (std::size_t i = 0; i + 1 < m; ++i)
      if (knots_[i] <= t && t < knots_[i + 1]) N[i] = 1.0;
  }
  for (int deg = 1; deg <= 3; ++deg) {
    for (std::size_t i = 0; i + static_cast<std::size_t>(deg) + 1 < m; ++i) {
      const double den1 = knots_[i + static_cast<std::size_t>(deg)] - knots_[i];
      const double den2 = knots_[i + static_cast<std::size_t>(deg) + 1] - knots_[i + 1];
      double v = 0.0;
      if (den1 > 0.0) v += (t - knots_[i]) / den1 * N[i];
      if (den2 > 0.0) v += (knots_[i + static_cast<std::size_t>(deg) + 1] - t) / den2 * N[i + 1];
      N[i] = v;
    }
  }
  Eigen::VectorXd out(k_);
  for (int i = 0; i < k_; ++i) out[i] = N[static_cast<std::size_t>(i)];
  return out;
}

Eigen::MatrixXd BsplineBasis::design(const std::vector<double>& grid) const {
  Eigen::MatrixXd B(static_cast<Eigen::Index>(grid.size()), k_);
  for (std::size_t i = 0; i < grid.size(); ++i)
    B.row(static_cast<Eigen::Index>(i)) = evaluate_all(grid[i]).transpose();
  return B;
}

FourierBasis::FourierBasis(int k) : k_(k) {
  if (k_ < 1 || k_ % 2 == 0)
    throw std::invalid_argument("FourierBasis: k must be odd (constant plus sine/cosine pairs)");
}

Eigen::VectorXd FourierBasis::evaluate_all(double t) const {
  Eigen::VectorXd out(k_);
  out[0] = 1.0;
  for (int pair = 1; 2 * pair - 1 < k_; ++pair) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(pair) * t;
    out[2 * pair - 1] = std::sin(a);
    out[2 * pair] = std::cos(a);
  }
  return out;
}

Eigen::MatrixXd FourierBasis::design(const std::vector<double>& grid) const {
  Eigen::MatrixXd B(static_cast<Eigen::Index>(grid.size()), k_);
  for (std::size_t i = 0; i < grid.size(); ++i)
    B.row(static_cast<Eigen::Index>(i)) = evaluate_all(grid[i]).transpose();
  return B;
}

BasisProjector::BasisProjector(Eigen::MatrixXd design) : design_(std::move(design)), qr_(design_) {
  if (qr_.rank() < design_.cols())
    throw std::invalid_argument("BasisProjector: design matrix is rank deficient (" +
                                std::to_string(qr_.rank()) + " < " + std::to_string(design_.cols()) +
                                "); reduce k or enlarge the grid");
}

Eigen::VectorXd BasisProjector::project(const Eigen::VectorXd& grid_values) const {
  if (grid_values.size() != design_.rows())
    throw std::invalid_argument("BasisProjector: grid length mismatch");
  return qr_.solve(grid_values);
}

namespace {

Eigen::VectorXd project_sample(const Sample& s, const BasisProjector& projector,
                               const std::vector<double>& grid) {
  const auto k = projector.design().cols();
  Eigen::VectorXd out(static_cast<Eigen::Index>(s.channels.size()) * k);
  for (std::size_t c = 0; c < s.channels.size(); ++c)
    out.segment(static_cast<Eigen::Index>(c) * k, k) =
        projector.project(channel_on_grid(s.channels[c], grid));
  return out;
}

}  // namespace

Eigen::VectorXd bspline_features(const Sample& s, int k, const std::vector<double>& grid) {
  const BasisProjector projector(BsplineBasis(k).design(grid));
  return project_sample(s, projector, grid);
}

Eigen::VectorXd fourier_features(const Sample& s, int k, const std::vector<double>& grid) {
  const BasisProjector projector(FourierBasis(k).design(grid));
  return project_sample(s, projector, grid);
}

FpcaState fpca_fit(const Dataset& train, int k, const std::vector<double>& grid) {
  train.validate();
  const auto n = static_cast<Eigen::Index>(train.size());
  const auto G = static_cast<Eigen::Index>(grid.size());
  if (k < 1) throw std::invalid_argument("fpca_fit: k must be >= 1");
  if (k > std::min(n, G))
    throw std::invalid_argument("fpca_fit: k = " + std::to_string(k) +
                                " exceeds min(samples, grid) = " +
                                std::to_string(std::min(n, G)));

  FpcaState state;
  state.k = k;
  for (int c = 0; c < train.meta.num_channels; ++c) {
    Eigen::MatrixXd R(n, G);
    for (Eigen::Index i = 0; i < n; ++i)
      R.row(i) = channel_on_grid(train.samples[static_cast<std::size_t>(i)]
                                     .channels[static_cast<std::size_t>(c)],
                                 grid)
                     .transpose();
    FpcaChannel ch;
    ch.mean = R.colwise().mean();
    R.rowwise() -= ch.mean.transpose();
    const Eigen::MatrixXd C = R.transpose() * R / static_cast<double>(n);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(C);
    if (eig.info() != Eigen::Success) throw std::runtime_error("fpca_fit: eigendecomposition failed");
    ch.components.resize(G, k);
    ch.eigenvalues.resize(k);
    for (int j = 0; j < k; ++j) {
      // Eigen orders eigenvalues ascending; take from the top.
      Eigen::VectorXd v = eig.eigenvectors().col(G - 1 - j);
      Eigen::Index imax = 0;
      v.cwiseAbs().maxCoeff(&imax);
      if (v[imax] < 0.0) v = -v;  // deterministic sign
      ch.components.col(j) = v;
      ch.eigenvalues[j] = eig.eigenvalues()[G - 1 - j];
    }
    state.channels.push_back(std::move(ch));
  }
  return state;
}

Eigen::VectorXd fpca_features(const FpcaState& state, const Sample& s,
                              const std::vector<double>& grid) {
  if (state.channels.size() != s.channels.size())
    throw std::invalid_argument("fpca_features: channel count mismatch with fitted state");
  const int k = state.k;
  Eigen::VectorXd out(static_cast<Eigen::Index>(s.channels.size()) * k);
  for (std::size_t c = 0; c < s.channels.size(); ++c) {
    const Eigen::VectorXd centered =
        channel_on_grid(s.channels[c], grid) - state.channels[c].mean;
    out.segment(static_cast<Eigen::Index>(c) * k, k) =
        state.channels[c].components.transpose() * centered;
  }
  return out;
}

Eigen::MatrixXd baseline_features(BaselineKind kind, const Dataset& ds, int k,
                                  const std::vector<double>& grid, const FpcaState* state) {
  ds.validate();
  if (ds.meta.num_channels < 1)
    throw std::invalid_argument("baseline_features: need at least one functional channel");
  const auto n = static_cast<Eigen::Index>(ds.size());
  const auto q = static_cast<Eigen::Index>(ds.meta.q);

  if (kind == BaselineKind::Fpca) {
    if (state == nullptr) throw std::invalid_argument("baseline_features: Fpca needs a fitted state");
    k = state->k;
  }
  const Eigen::Index width = static_cast<Eigen::Index>(ds.meta.num_channels) * k;

  std::optional<BasisProjector> projector;
  if (kind != BaselineKind::Fpca)
    projector.emplace(kind == BaselineKind::Bspline ? BsplineBasis(k).design(grid)
                                                    : FourierBasis(k).design(grid));
  Eigen::MatrixXd X(n, width + q);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = ds.samples[static_cast<std::size_t>(i)];
    if (kind == BaselineKind::Fpca)
      X.row(i).head(width) = fpca_features(*state, s, grid).transpose();
    else
      X.row(i).head(width) = project_sample(s, *projector, grid).transpose();
    X.row(i).tail(q) = s.scalars.transpose();
  }
  return X;
}

std::vector<int> default_k_grid(BaselineKind kind) {
  std::vector<int> grid;
  switch (kind) {
    case BaselineKind::Bspline:
      for (int k = 4; k <= 15; ++k) grid.push_back(k);
      break;
    case BaselineKind::Fourier:
      for (int k = 3; k <= 15; k += 2) grid.push_back(k);
      break;
    case BaselineKind::Fpca:
      for (int k = 1; k <= 10; ++k) grid.push_back(k);
      break;
  }
  return grid;
}

BaselineModel fit_baseline(BaselineKind kind, const Dataset& train, const std::vector<int>& k_grid,
                           int folds, double lambda, std::uint64_t seed,
                           const std::vector<double>& grid, const LassoOptions& lasso) {
  train.validate();
  if (k_grid.empty()) throw std::invalid_argument("fit_baseline: empty k grid");
  std::vector<int> ks = k_grid;
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

  const std::vector<int> y = labels_of(train);
  int best_k = ks.front();

  if (ks.size() > 1) {
    const std::vector<int> fold_of = stratified_folds(y, folds, seed);
    double best_risk = 0.0;
    bool first = true;
    for (const int k : ks) {
      double mean_risk = 0.0;
      for (int f = 0; f < folds; ++f) {
        Dataset tr, va;
        tr.meta = train.meta;
        va.meta = train.meta;
        for (std::size_t i = 0; i < train.size(); ++i)
          (fold_of[i] == f ? va : tr).samples.push_back(train.samples[i]);

        FpcaState state;
        const FpcaState* state_ptr = nullptr;
        if (kind == BaselineKind::Fpca) {
          state = fpca_fit(tr, k, grid);
          state_ptr = &state;
        }
        const Eigen::MatrixXd Xtr = baseline_features(kind, tr, k, grid, state_ptr);
        const Eigen::MatrixXd Xva = baseline_features(kind, va, k, grid, state_ptr);
        const auto stats = standardize_fit(Xtr);
        const LassoFit fit = fit_lasso_logistic(standardize_apply(Xtr, stats), labels_of(tr), lambda, lasso);
        mean_risk += empirical_risk(fit.theta, standardize_apply(Xva, stats), labels_of(va)) /
                     static_cast<double>(folds);
      }
      if (first || mean_risk < best_risk) {  // strict: ties keep the smaller k
        best_risk = mean_risk;
        best_k = k;
        first = false;
      }
    }
  }

  BaselineModel model;
  model.kind = kind;
  model.k = best_k;
  model.lambda = lambda;
  model.grid = grid;
  const FpcaState* state_ptr = nullptr;
  if (kind == BaselineKind::Fpca) {
    model.fpca = fpca_fit(train, best_k, grid);
    state_ptr = &model.fpca;
  }
  const Eigen::MatrixXd X = baseline_features(kind, train, best_k, grid, state_ptr);
  model.stats = standardize_fit(X);
  model.theta = fit_lasso_logistic(standardize_apply(X, model.stats), y, lambda, lasso).theta;
  return model;
}

std::vector<int> baseline_predict(const BaselineModel& model, const Dataset& ds) {
  const FpcaState* state_ptr = model.kind == BaselineKind::Fpca ? &model.fpca : nullptr;
  const Eigen::MatrixXd X = baseline_features(model.kind, ds, model.k, model.grid, state_ptr);
  return predict_labels(model.theta, standardize_apply(X, model.stats));
}

}  // namespace sigclass
