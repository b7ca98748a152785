#include "sigclass/logistic.hpp"

#include <cmath>
#include <string>

namespace sigclass {

namespace {

void check_labels(const std::vector<int>& y, Eigen::Index n) {
  if (static_cast<Eigen::Index>(y.size()) != n)
    throw std::invalid_argument("labels: expected " + std::to_string(n) + " entries, got " +
                                std::to_string(y.size()));
  for (int v : y)
    if (v != 0 && v != 1) throw std::invalid_argument("labels must be 0 or 1, got " + std::to_string(v));
}

void check_matrix(const Eigen::MatrixXd& X) {
  if (X.rows() == 0 || X.cols() == 0) throw std::invalid_argument("feature matrix is empty");
  if (!X.allFinite()) throw std::invalid_argument("feature matrix contains non-finite values");
}

}  // namespace

StandardizationStats standardize_fit(const Eigen::MatrixXd& X) {
  check_matrix(X);
  if (X.rows() < 2) throw std::invalid_argument("standardize_fit: need at least 2 rows");
  const double n = static_cast<double>(X.rows());
  StandardizationStats stats;
  stats.mean = X.colwise().mean();
  stats.scale.resize(X.cols());
  stats.constant_mask.assign(static_cast<std::size_t>(X.cols()), false);
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double var = (X.col(j).array() - stats.mean[j]).square().sum() / n;
    const double sd = std::sqrt(var);
    if (sd == 0.0) {
      stats.constant_mask[static_cast<std::size_t>(j)] = true;
      stats.scale[j] = 1.0;
    } else {
      stats.scale[j] = sd;
    }
  }
  return stats;
}

Eigen::MatrixXd standardize_apply(const Eigen::MatrixXd& X, const StandardizationStats& stats) {
  check_matrix(X);
  if (X.cols() != stats.mean.size())
    throw std::invalid_argument("standardize_apply: column count does not match statistics");
  Eigen::MatrixXd out = X;
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    if (stats.constant_mask[static_cast<std::size_t>(j)]) continue;
    out.col(j) = (X.col(j).array() - stats.mean[j]) / stats.scale[j];
  }
  return out;
}

double log1p_exp(double s) { return s > 0.0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s)); }

double sigmoid(double s) {
  if (s >= 0.0) return 1.0 / (1.0 + std::exp(-s));
  const double e = std::exp(s);
  return e / (1.0 + e);
}

double empirical_risk(const Eigen::VectorXd& theta, const Eigen::MatrixXd& X,
                      const std::vector<int>& y) {
  check_matrix(X);
  check_labels(y, X.rows());
  if (theta.size() != X.cols())
    throw std::invalid_argument("empirical_risk: theta length does not match feature count");
  const Eigen::VectorXd s = X * theta;
  double total = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    total += -static_cast<double>(y[static_cast<std::size_t>(i)]) * s[i] + log1p_exp(s[i]);
  return total / static_cast<double>(s.size());
}

Eigen::VectorXd risk_gradient(const Eigen::VectorXd& theta, const Eigen::MatrixXd& X,
                              const std::vector<int>& y) {
  check_matrix(X);
  check_labels(y, X.rows());
  if (theta.size() != X.cols())
    throw std::invalid_argument("risk_gradient: theta length does not match feature count");
  const Eigen::VectorXd s = X * theta;
  Eigen::VectorXd resid(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i)
    resid[i] = sigmoid(s[i]) - static_cast<double>(y[static_cast<std::size_t>(i)]);
  return X.transpose() * resid / static_cast<double>(s.size());
}

double penalized_objective(const Eigen::VectorXd& theta, const Eigen::MatrixXd& X,
                           const std::vector<int>& y, double lambda) {
  return empirical_risk(theta, X, y) + lambda * theta.lpNorm<1>();
}

double max_kkt_violation(const Eigen::VectorXd& theta, const Eigen::MatrixXd& X,
                         const std::vector<int>& y, double lambda) {
  const Eigen::VectorXd g = risk_gradient(theta, X, y);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    const double v = theta[j] == 0.0
                         ? std::max(0.0, std::abs(g[j]) - lambda)
                         : std::abs(g[j] + lambda * (theta[j] > 0.0 ? 1.0 : -1.0));
    worst = std::max(worst, v);
  }
  return worst;
}

namespace {

double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

// One sweep over the given coordinates. Scores and probabilities are kept
// current after every accepted coordinate move. Returns the largest move.
double sweep(const Eigen::MatrixXd& X, const std::vector<double>& y, const Eigen::VectorXd& curvature,
             double lambda, const std::vector<Eigen::Index>& coords, Eigen::VectorXd& theta,
             Eigen::VectorXd& scores) {
  const double n = static_cast<double>(X.rows());
  double max_move = 0.0;
  for (const Eigen::Index j : coords) {
    const double h = curvature[j];
    if (h == 0.0) continue;  // all-zero column; gradient is 0 and theta_j stays 0
    double g = 0.0;
    for (Eigen::Index i = 0; i < X.rows(); ++i)
      g += X(i, j) * (sigmoid(scores[i]) - y[static_cast<std::size_t>(i)]);
    g /= n;
    const double updated = soft_threshold(theta[j] - g / h, lambda / h);
    const double delta = updated - theta[j];
    if (delta != 0.0) {
      scores += delta * X.col(j);
      theta[j] = updated;
      max_move = std::max(max_move, std::abs(delta));
    }
  }
  return max_move;
}

}  // namespace

LassoFit fit_lasso_logistic(const Eigen::MatrixXd& X, const std::vector<int>& y, double lambda,
                            const LassoOptions& options, const Eigen::VectorXd& warm_start) {
  check_matrix(X);
  check_labels(y, X.rows());
  if (lambda < 0.0) throw std::invalid_argument("fit_lasso_logistic: lambda must be >= 0");
  if (warm_start.size() != 0) {
    if (warm_start.size() != X.cols())
      throw std::invalid_argument("fit_lasso_logistic: warm start length does not match columns");
    if (!warm_start.allFinite())
      throw std::invalid_argument("fit_lasso_logistic: warm start must be finite");
  }

  const Eigen::Index D = X.cols();
  std::vector<double> yd(y.begin(), y.end());

  // Per-coordinate curvature upper bound of the logistic loss: sigma' <= 1/4.
  Eigen::VectorXd curvature(D);
  for (Eigen::Index j = 0; j < D; ++j)
    curvature[j] = X.col(j).squaredNorm() / (4.0 * static_cast<double>(X.rows()));

  std::vector<Eigen::Index> all(static_cast<std::size_t>(D));
  for (Eigen::Index j = 0; j < D; ++j) all[static_cast<std::size_t>(j)] = j;

  LassoFit fit;
  fit.theta = Eigen::VectorXd::Zero(D);
  Eigen::VectorXd scores = Eigen::VectorXd::Zero(X.rows());
  if (warm_start.size() != 0) {
    fit.theta = warm_start;
    scores = X * fit.theta;
  }

  // The pass cap counts full-dimension sweeps. Active-set refinement sweeps
  // only touch the current support and are far cheaper, so they draw on a
  // separate overall budget instead of the pass cap; the budget guarantees
  // termination when the majorization crawls near saturation.
  int passes = 0;
  long sweeps = 0;
  const long sweep_budget = 100L * static_cast<long>(options.max_passes);
  while (passes < options.max_passes && sweeps < sweep_budget) {
    const double moved = sweep(X, yd, curvature, lambda, all, fit.theta, scores);
    ++passes;
    ++sweeps;
    if (options.record_objective) fit.objective.push_back(penalized_objective(fit.theta, X, y, lambda));

    if (moved <= options.tol_change) {
      const double viol = max_kkt_violation(fit.theta, X, y, lambda);
      if (viol <= options.kkt_tol) {
        fit.converged = true;
        fit.kkt_violation = viol;
        fit.passes = passes;
        return fit;
      }
      // A stalled full sweep that still violates KKT keeps iterating until
      // the caps; the quadratic bound guarantees progress is monotone.
    }

    // Active-set refinement: iterate the support until it stops moving, then
    // re-verify with a full sweep on the next loop iteration.
    std::vector<Eigen::Index> active;
    for (Eigen::Index j = 0; j < D; ++j)
      if (fit.theta[j] != 0.0) active.push_back(j);
    if (!active.empty() && active.size() < all.size()) {
      while (sweeps < sweep_budget) {
        const double inner = sweep(X, yd, curvature, lambda, active, fit.theta, scores);
        ++sweeps;
        if (options.record_objective)
          fit.objective.push_back(penalized_objective(fit.theta, X, y, lambda));
        if (inner <= options.tol_change) break;
      }
    }
  }

  fit.kkt_violation = max_kkt_violation(fit.theta, X, y, lambda);
  fit.passes = passes;
  if (fit.kkt_violation > options.kkt_tol)
    throw SolverError("fit_lasso_logistic: pass cap " + std::to_string(options.max_passes) +
                      " reached with KKT violation " + std::to_string(fit.kkt_violation));
  fit.converged = true;
  return fit;
}

double predict_proba(const Eigen::VectorXd& theta, const Eigen::VectorXd& features) {
  if (theta.size() != features.size())
    throw std::invalid_argument("predict_proba: dimension mismatch");
  return sigmoid(theta.dot(features));
}

Eigen::VectorXd predict_scores(const Eigen::VectorXd& theta, const Eigen::MatrixXd& X) {
  if (theta.size() != X.cols()) throw std::invalid_argument("predict_scores: dimension mismatch");
  return X * theta;
}

std::vector<int> predict_labels(const Eigen::VectorXd& theta, const Eigen::MatrixXd& X) {
  const Eigen::VectorXd s = predict_scores(theta, X);
  std::vector<int> labels(static_cast<std::size_t>(s.size()));
  for (Eigen::Index i = 0; i < s.size(); ++i) labels[static_cast<std::size_t>(i)] = s[i] > 0.0 ? 1 : 0;
  return labels;
}

}  // namespace sigclass
