#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "sigclass/dataset.hpp"
#include "sigclass/logistic.hpp"

namespace sigclass {

// Fixed-basis competitors: every channel is linearly interpolated onto a
// shared uniform grid and summarized by k coefficients per channel, which
// then feed the same standardize + lasso protocol as the signature model.
// The interpolation onto a common grid is exactly where these baselines pay
// for irregular sampling and missing observations.

enum class BaselineKind { Bspline, Fourier, Fpca };

BaselineKind baseline_kind_from_string(const std::string& name);
std::string to_string(BaselineKind kind);

// Channel values on the shared grid (linear interpolation inside the
// observed range, constant extension outside).
Eigen::VectorXd channel_on_grid(const ChannelSeries& ch, const std::vector<double>& grid);

// Cubic B-spline basis with an open uniform knot vector on [0, 1]: k basis
// functions, k >= 4. Evaluation follows Cox-de Boor.
class BsplineBasis {
 public:
  explicit BsplineBasis(int k);
  int size() const { return k_; }
  Eigen::VectorXd evaluate_all(double t) const;
  Eigen::MatrixXd design(const std::vector<double>& grid) const;

 private:
  int k_;
  std::vector<double> knots_;
};

// Fourier basis on [0, 1]: constant plus sine/cosine pairs, so k must be
// odd: {1, sin(2 pi t), cos(2 pi t), sin(4 pi t), ...}.
class FourierBasis {
 public:
  explicit FourierBasis(int k);
  int size() const { return k_; }
  Eigen::VectorXd evaluate_all(double t) const;
  Eigen::MatrixXd design(const std::vector<double>& grid) const;

 private:
  int k_;
};

// Least-squares projection of grid curves onto a basis design matrix,
// factored once and reused. Throws if the design is column-rank deficient.
class BasisProjector {
 public:
  BasisProjector(Eigen::MatrixXd design);
  Eigen::VectorXd project(const Eigen::VectorXd& grid_values) const;
  const Eigen::MatrixXd& design() const { return design_; }

 private:
  Eigen::MatrixXd design_;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_;
};

// Per-channel coefficients, concatenated channel 0, 1, ... Each returns
// num_channels * k features.
Eigen::VectorXd bspline_features(const Sample& s, int k, const std::vector<double>& grid);
Eigen::VectorXd fourier_features(const Sample& s, int k, const std::vector<double>& grid);

// Functional PCA per channel on the shared grid: training mean curve,
// eigenvectors of the sample covariance (orthonormal in the grid inner
// product, deterministic sign), and the leading-k scores as features.
struct FpcaChannel {
  Eigen::VectorXd mean;
  Eigen::MatrixXd components;   // grid_size x k, columns ordered by decreasing eigenvalue
  Eigen::VectorXd eigenvalues;  // leading k, descending
};

struct FpcaState {
  std::vector<FpcaChannel> channels;
  int k = 0;
};

FpcaState fpca_fit(const Dataset& train, int k, const std::vector<double>& grid);
Eigen::VectorXd fpca_features(const FpcaState& state, const Sample& s, const std::vector<double>& grid);

// Feature matrix for a whole dataset: num_channels * k basis coefficients
// per sample with the scalar covariates appended, so each row has
// num_channels * k + q entries. state is required for Fpca and must come
// from training data only.
Eigen::MatrixXd baseline_features(BaselineKind kind, const Dataset& ds, int k,
                                  const std::vector<double>& grid, const FpcaState* state);

// Cross-validation grids for the basis size.
std::vector<int> default_k_grid(BaselineKind kind);

struct BaselineModel {
  BaselineKind kind = BaselineKind::Bspline;
  int k = 0;
  double lambda = 0.0;
  std::vector<double> grid;
  FpcaState fpca;  // only for Fpca
  StandardizationStats stats;
  Eigen::VectorXd theta;
};

// Chooses k by stratified cross-validation (minimal mean validation risk,
// ties toward the smaller k), then refits on all of train at the winner.
BaselineModel fit_baseline(BaselineKind kind, const Dataset& train, const std::vector<int>& k_grid,
                           int folds, double lambda, std::uint64_t seed,
                           const std::vector<double>& grid, const LassoOptions& lasso = {});

std::vector<int> baseline_predict(const BaselineModel& model, const Dataset& ds);

}  // namespace sigclass
