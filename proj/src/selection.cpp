#include "sigclass/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "sigclass/features.hpp"

namespace sigclass {

double penalty(int p, const PenaltySpec& spec) {
  if (p < 0) throw std::invalid_argument("penalty: order must be >= 0");
  if (spec.c_pen < 0.0) throw std::invalid_argument("penalty: c_pen must be >= 0");
  if (spec.rho <= 0.0 || spec.rho >= 0.5)
    throw std::invalid_argument("penalty: rho must lie strictly inside (0, 0.5)");
  if (spec.q < 0) throw std::invalid_argument("penalty: q must be >= 0");
  if (spec.n < 1) throw std::invalid_argument("penalty: n must be >= 1");
  if (spec.alphabet < 1) throw std::invalid_argument("penalty: alphabet must be >= 1");
  const auto dim = static_cast<double>(sig_dim(spec.alphabet, p));
  return spec.c_pen * std::sqrt(dim * std::exp(static_cast<double>(spec.q))) /
         std::pow(static_cast<double>(spec.n), spec.rho);
}

std::size_t argmin_first(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("argmin_first: empty input");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] < values[best]) best = i;
  return best;
}

namespace {

PenaltySpec resolve_spec(const Dataset& train, const PenaltySpec& spec) {
  PenaltySpec out = spec;
  const int alphabet = train.meta.num_channels > 0 ? alphabet_size(train) : 1;
  if (out.alphabet == 0) out.alphabet = alphabet;
  if (out.alphabet != alphabet)
    throw std::invalid_argument("select_order: penalty alphabet " + std::to_string(out.alphabet) +
                                " does not match the data (" + std::to_string(alphabet) + ")");
  if (out.n == 0) out.n = static_cast<int>(train.size());
  if (out.n != static_cast<int>(train.size()))
    throw std::invalid_argument("select_order: penalty n does not match the training size");
  if (out.q == 0) out.q = train.meta.q;
  if (out.q != train.meta.q && !(out.q == 0 && train.meta.q == 0))
    throw std::invalid_argument("select_order: penalty q " + std::to_string(out.q) +
                                " does not match the data (" + std::to_string(train.meta.q) + ")");
  return out;
}

void check_two_classes(const Dataset& train) {
  const auto [zeros, ones] = train.class_counts();
  if (zeros == 0 || ones == 0)
    throw std::invalid_argument("select_order: training data must contain both classes");
}

// `warm` is the previous (smaller) order's solution and `warm_sig` its
// signature-block width. Because the shared signature columns and the scalar
// tail are bitwise-identical raw features, their standardization stats match
// across orders, so embedding the old coefficients (new coordinates at zero)
// starts the solver at the exact previous optimum.
OrderRecord fit_at_order(const Dataset& train, int p, double lambda, const PenaltySpec& spec,
                         const SelectOptions& options, const Eigen::VectorXd& warm,
                         Eigen::Index warm_sig) {
  const Eigen::MatrixXd X = signature_features(train, p, train.meta.q > 0, options.feature_budget);
  const std::vector<int> y = labels_of(train);
  OrderRecord rec;
  rec.p = p;
  rec.stats = standardize_fit(X);
  const Eigen::MatrixXd Z = standardize_apply(X, rec.stats);
  Eigen::VectorXd start;
  if (warm.size() != 0) {
    start = Eigen::VectorXd::Zero(Z.cols());
    start.head(warm_sig) = warm.head(warm_sig);
    const Eigen::Index scalar_tail = warm.size() - warm_sig;
    if (scalar_tail > 0) start.tail(scalar_tail) = warm.tail(scalar_tail);
  }
  const LassoFit fit = fit_lasso_logistic(Z, y, lambda, options.lasso, start);
  rec.theta = fit.theta;
  rec.risk = empirical_risk(fit.theta, Z, y);
  rec.penalty = penalty(p, spec);
  rec.criterion = rec.risk + rec.penalty;
  return rec;
}

// Largest order the loop may visit: explicit p_max, or the hard cap and
// feature budget in auto mode.
int order_limit(const Dataset& train, const SelectOptions& options) {
  if (options.p_max >= 0) return options.p_max;
  if (train.meta.num_channels == 0) return 0;
  const int alphabet = alphabet_size(train);
  int p = 0;
  while (p < options.p_hard_cap) {
    try {
      if (sig_dim(alphabet, p + 1) > options.feature_budget) break;
    } catch (const std::overflow_error&) {
      break;
    }
    ++p;
  }
  return p;
}

std::vector<OrderRecord> selection_curve(const Dataset& train, double lambda,
                                         const PenaltySpec& spec, const SelectOptions& options) {
  train.validate();
  check_two_classes(train);
  if (!(lambda >= 0.0)) throw std::invalid_argument("select_order: lambda must be >= 0");

  const int limit = order_limit(train, options);
  if (train.meta.num_channels == 0 && limit != 0)
    throw std::invalid_argument("select_order: datasets without channels only support order 0");
  const bool grow = options.p_max < 0;

  std::vector<OrderRecord> records;
  Eigen::VectorXd warm;
  Eigen::Index warm_sig = 0;
  double best_criterion = std::numeric_limits<double>::infinity();
  for (int p = 0; p <= limit; ++p) {
    // The penalty grows with p and the risk is nonnegative, so once the
    // penalty alone exceeds the best criterion seen, neither this order nor
    // any later one can be selected; stop without fitting them. (The same
    // bound holds after scaling c_pen up, so a curve grown at the smallest
    // calibration value stays valid across the whole grid.)
    if (grow && !records.empty() && penalty(p, spec) > best_criterion) break;
    records.push_back(fit_at_order(train, p, lambda, spec, options, warm, warm_sig));
    best_criterion = std::min(best_criterion, records.back().criterion);
    warm = records.back().theta;
    warm_sig = static_cast<Eigen::Index>(signature_width(train, p));
    if (grow && records.size() >= 3) {
      const auto k = records.size();
      if (records[k - 1].criterion > records[k - 2].criterion &&
          records[k - 2].criterion > records[k - 3].criterion)
        break;
    }
  }
  return records;
}

int pick_order(const std::vector<OrderRecord>& records) {
  std::vector<double> criteria;
  criteria.reserve(records.size());
  for (const auto& r : records) criteria.push_back(r.criterion);
  return records[argmin_first(criteria)].p;
}

}  // namespace

OrderSelectionTrace select_order(const Dataset& train, double lambda, const PenaltySpec& spec,
                                 const SelectOptions& options) {
  const PenaltySpec resolved = resolve_spec(train, spec);
  OrderSelectionTrace trace;
  trace.records = selection_curve(train, lambda, resolved, options);
  trace.selected_p = pick_order(trace.records);
  return trace;
}

double first_sharp_drop(const std::vector<double>& c_grid, const std::vector<int>& p_hats) {
  if (c_grid.size() != p_hats.size() || c_grid.size() < 2)
    throw std::invalid_argument("first_sharp_drop: need matching grids with >= 2 entries");
  for (std::size_t i = 1; i < c_grid.size(); ++i)
    if (!(c_grid[i] > c_grid[i - 1]))
      throw std::invalid_argument("first_sharp_drop: grid must be strictly increasing");
  if (*std::min_element(p_hats.begin(), p_hats.end()) != 0)
    throw std::invalid_argument("first_sharp_drop: p_hat never reaches 0 on the grid; "
                                "extend the grid upward");
  int largest = 0;
  std::size_t at = 0;
  for (std::size_t i = 1; i < p_hats.size(); ++i) {
    const int drop = p_hats[i - 1] - p_hats[i];
    if (drop > largest) {  // strict: ties keep the smallest grid value
      largest = drop;
      at = i;
    }
  }
  if (largest <= 0)
    throw std::invalid_argument("first_sharp_drop: p_hat never decreases along the grid");
  return c_grid[at];
}

SlopeTrace slope_heuristic(const Dataset& train, double lambda, const std::vector<double>& c_grid,
                           double rho, const SelectOptions& options) {
  if (c_grid.size() < 2) throw std::invalid_argument("slope_heuristic: need a grid of >= 2 values");
  std::vector<double> grid = c_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.front() <= 0.0)
    throw std::invalid_argument("slope_heuristic: grid values must be positive");

  // Risks and thetas do not depend on c_pen, so the curve is computed once
  // at the weakest penalty (which also grows p_max farthest in auto mode)
  // and the grid sweep is arithmetic on top of it.
  PenaltySpec spec;
  spec.c_pen = grid.front();
  spec.rho = rho;
  const PenaltySpec resolved = resolve_spec(train, spec);
  const auto records = selection_curve(train, lambda, resolved, options);

  std::vector<double> unit_penalty;  // penalty at c_pen = 1
  std::vector<double> risks;
  for (const auto& r : records) {
    unit_penalty.push_back(r.penalty / resolved.c_pen);
    risks.push_back(r.risk);
  }

  SlopeTrace trace;
  trace.c_grid = grid;
  trace.p_hats.reserve(grid.size());
  for (const double c : grid) {
    std::vector<double> criteria(risks.size());
    for (std::size_t p = 0; p < risks.size(); ++p) criteria[p] = risks[p] + c * unit_penalty[p];
    trace.p_hats.push_back(records[argmin_first(criteria)].p);
  }
  trace.drop_at = first_sharp_drop(trace.c_grid, trace.p_hats);
  trace.c_pen = 2.0 * trace.drop_at;
  return trace;
}

std::vector<double> default_cpen_grid() {
  std::vector<double> grid(20);
  for (int i = 0; i < 20; ++i)
    grid[static_cast<std::size_t>(i)] = std::pow(10.0, -3.0 + 4.0 * static_cast<double>(i) / 19.0);
  return grid;
}

std::vector<double> default_lambda_grid() {
  std::vector<double> grid(20);
  for (int i = 0; i < 20; ++i)
    grid[static_cast<std::size_t>(i)] = std::pow(10.0, -4.0 + 4.0 * static_cast<double>(i) / 19.0);
  return grid;
}

double tune_lambda(const Dataset& train, int folds, std::vector<double> lambda_grid,
                   std::uint64_t seed, const LassoOptions& lasso) {
  train.validate();
  check_two_classes(train);
  if (lambda_grid.empty()) throw std::invalid_argument("tune_lambda: empty lambda grid");
  for (double v : lambda_grid)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument("tune_lambda: lambda values must be finite and >= 0");
  std::sort(lambda_grid.begin(), lambda_grid.end());
  lambda_grid.erase(std::unique(lambda_grid.begin(), lambda_grid.end()), lambda_grid.end());

  const int order = train.meta.num_channels > 0 ? 1 : 0;
  const Eigen::MatrixXd X = signature_features(train, order, train.meta.q > 0);
  const std::vector<int> y = labels_of(train);
  const std::vector<int> fold_of = stratified_folds(y, folds, seed);

  std::vector<double> mean_risk(lambda_grid.size(), 0.0);
  for (int f = 0; f < folds; ++f) {
    std::vector<Eigen::Index> tr, va;
    for (std::size_t i = 0; i < fold_of.size(); ++i)
      (fold_of[i] == f ? va : tr).push_back(static_cast<Eigen::Index>(i));

    Eigen::MatrixXd Xtr(static_cast<Eigen::Index>(tr.size()), X.cols());
    Eigen::MatrixXd Xva(static_cast<Eigen::Index>(va.size()), X.cols());
    std::vector<int> ytr(tr.size()), yva(va.size());
    for (std::size_t i = 0; i < tr.size(); ++i) {
      Xtr.row(static_cast<Eigen::Index>(i)) = X.row(tr[i]);
      ytr[i] = y[static_cast<std::size_t>(tr[i])];
    }
    for (std::size_t i = 0; i < va.size(); ++i) {
      Xva.row(static_cast<Eigen::Index>(i)) = X.row(va[i]);
      yva[i] = y[static_cast<std::size_t>(va[i])];
    }

    const auto stats = standardize_fit(Xtr);
    const Eigen::MatrixXd Ztr = standardize_apply(Xtr, stats);
    const Eigen::MatrixXd Zva = standardize_apply(Xva, stats);
    // Pathwise sweep from the most to the least regularized value, warm
    // starting each fit from the previous solution; the weakly penalized
    // fits would otherwise crawl from a zero start.
    Eigen::VectorXd warm;
    for (std::size_t g = lambda_grid.size(); g-- > 0;) {
      const LassoFit fit = fit_lasso_logistic(Ztr, ytr, lambda_grid[g], lasso, warm);
      warm = fit.theta;
      mean_risk[g] += empirical_risk(fit.theta, Zva, yva) / static_cast<double>(folds);
    }
  }

  std::size_t best = 0;
  for (std::size_t g = 1; g < lambda_grid.size(); ++g)
    if (mean_risk[g] <= mean_risk[best]) best = g;  // ties go to the larger lambda
  return lambda_grid[best];
}

}  // namespace sigclass
