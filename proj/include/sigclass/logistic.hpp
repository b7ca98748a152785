#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace sigclass {

// Binary logistic regression pieces shared by the signature model and the
// basis-function baselines. Labels are 0/1; the feature matrix carries one
// row per sample. There is no separate intercept: the order-0 signature
// coefficient (a column of ones) plays that role and is penalized like any
// other coordinate.

struct StandardizationStats {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;            // population standard deviation; 1 where constant
  std::vector<bool> constant_mask;  // true -> column passed through unchanged
};

// Column means and population standard deviations on training data. Columns
// whose standard deviation is exactly zero are flagged and left untouched by
// standardize_apply, so an all-ones column keeps its value. Throws for n < 2.
StandardizationStats standardize_fit(const Eigen::MatrixXd& X);

Eigen::MatrixXd standardize_apply(const Eigen::MatrixXd& X, const StandardizationStats& stats);

// log(1 + exp(s)) without overflow for any double.
double log1p_exp(double s);

// Logistic function computed from the side that keeps exp's argument <= 0.
double sigmoid(double s);

// Mean logistic loss (1/n) sum_i [ -y_i s_i + log(1 + exp(s_i)) ] with
// s = X theta. Finite for scores up to +-700 and beyond.
double empirical_risk(const Eigen::VectorXd& theta, const Eigen::MatrixXd& X,
                      const std::vector<int>& y);

// Gradient of empirical_risk: (1/n) X^T (sigmoid(X theta) - y).
Eigen::VectorXd risk_gradient(const Eigen::VectorXd& theta, const Eigen::MatrixXd& X,
                              const std::vector<int>& y);

struct LassoOptions {
  // Cap on full-dimension sweeps. Active-set refinement sweeps touch only
  // the nonzero coordinates and are billed to a separate overall budget of
  // 100 * max_passes sweeps, which bounds total work when the quadratic
  // majorization makes slow progress on saturated scores.
  int max_passes = 10000;
  double tol_change = 1e-8;  // max coordinate change per sweep
  double kkt_tol = 1e-6;
  bool record_objective = false;
};

struct LassoFit {
  Eigen::VectorXd theta;
  int passes = 0;
  bool converged = false;
  double kkt_violation = 0.0;
  std::vector<double> objective;  // penalized objective after each sweep, if recorded
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// l1-penalized logistic regression by cyclic coordinate descent on a
// quadratic majorization (curvature bound 1/4 per sample), with
// soft-threshold updates and an active-set sweep schedule. Deterministic:
// coordinates are visited in column order. Convergence is declared when a
// full sweep moves no coordinate by more than tol_change and the KKT
// conditions hold to kkt_tol; hitting max_passes with a KKT violation is a
// SolverError that reports the achieved violation.
// An empty warm_start begins coordinate descent at zero; a vector of length
// X.cols() begins at those coefficients instead. Warm starts change the
// iteration path, not the certified optimum — the KKT check still gates the
// result — and make nested-feature sweeps (growing truncation orders)
// converge in a handful of passes.
LassoFit fit_lasso_logistic(const Eigen::MatrixXd& X, const std::vector<int>& y, double lambda,
                            const LassoOptions& options = {},
                            const Eigen::VectorXd& warm_start = Eigen::VectorXd());

// Largest first-order optimality violation at theta: for zero coordinates
// the excess of |g_j| over lambda, for active ones |g_j + lambda sign|.
double max_kkt_violation(const Eigen::VectorXd& theta, const Eigen::MatrixXd& X,
                         const std::vector<int>& y, double lambda);

double penalized_objective(const Eigen::VectorXd& theta, const Eigen::MatrixXd& X,
                           const std::vector<int>& y, double lambda);

double predict_proba(const Eigen::VectorXd& theta, const Eigen::VectorXd& features);

Eigen::VectorXd predict_scores(const Eigen::VectorXd& theta, const Eigen::MatrixXd& X);

// Threshold 0.5: label 1 iff the score is strictly positive.
std::vector<int> predict_labels(const Eigen::VectorXd& theta, const Eigen::MatrixXd& X);

}  // namespace sigclass
