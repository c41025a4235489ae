#include "vsf/predictors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

namespace vsf {
namespace {

// Relative pivot threshold below which a column is treated as linearly
// dependent on the others.
constexpr double kRankThreshold = 1e-10;

struct LeastSquares {
  Eigen::VectorXd solution;
  bool rank_deficient = false;
};

// Minimum-norm least squares through a complete orthogonal decomposition.
// Equal to (A^T A)^-1 A^T b when A has full column rank.
LeastSquares solve_least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
  cod.setThreshold(kRankThreshold);
  cod.compute(a);
  return {cod.solve(b), cod.rank() < a.cols()};
}

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b)
    throw SizeError(std::string(what) + ": expected " + std::to_string(a) + " values, got " +
                    std::to_string(b));
}

}  // namespace

double FitTracker::score() const { return fit_score(chi2, nu); }

void push_history(std::vector<double>& history, double value, std::size_t order) {
  history.insert(history.begin(), value);
  if (history.size() > order) history.resize(order);
}

double sample_variance(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(values.size() - 1);
}

TemporalFilter fit_temporal(std::span<const double> training, std::size_t order,
                            double learning_rate, bool normalize_lms) {
  if (order < 1) throw SizeError("filter order must be at least 1");
  if (training.size() <= order)
    throw SizeError("training series of length " + std::to_string(training.size()) +
                    " is too short for filter order " + std::to_string(order));

  // Row r predicts d[order + r] from the `order` readings before it,
  // most recent first.
  const auto rows = static_cast<Eigen::Index>(training.size() - order);
  const auto cols = static_cast<Eigen::Index>(order);
  Eigen::MatrixXd u(rows, cols);
  Eigen::VectorXd d(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto target = static_cast<std::size_t>(r) + order;
    d(r) = training[target];
    for (Eigen::Index c = 0; c < cols; ++c)
      u(r, c) = training[target - 1 - static_cast<std::size_t>(c)];
  }

  const auto ls = solve_least_squares(u, d);
  TemporalFilter filter;
  filter.coeffs.assign(ls.solution.data(), ls.solution.data() + ls.solution.size());
  filter.learning_rate = learning_rate;
  filter.normalize_lms = normalize_lms;
  filter.degenerate = ls.rank_deficient;
  return filter;
}

TemporalFilter fit_temporal(const SensorTrace& training, std::size_t order,
                            double learning_rate, bool normalize_lms) {
  if (training.has_gaps())
    throw GapError("training trace '" + training.node_id + "' contains gaps");
  return fit_temporal(std::span<const double>(training.values), order, learning_rate,
                      normalize_lms);
}

double predict_temporal(const TemporalFilter& filter, std::span<const double> history) {
  require_same_size(filter.order(), history.size(), "temporal history");
  double sum = 0.0;
  for (std::size_t i = 0; i < history.size(); ++i) sum += filter.coeffs[i] * history[i];
  return sum;
}

TemporalFilter lms_update(const TemporalFilter& filter, std::span<const double> input,
                          double actual, double predicted) {
  require_same_size(filter.order(), input.size(), "LMS input");
  const double error = actual - predicted;
  double step = filter.learning_rate;
  if (filter.normalize_lms) {
    double energy = 0.0;
    for (double x : input) energy += x * x;
    step = filter.learning_rate / (kLmsRegularizer + energy);
  }
  TemporalFilter next = filter;
  for (std::size_t i = 0; i < input.size(); ++i) next.coeffs[i] += step * input[i] * error;
  return next;
}

SpatialRegressor fit_spatial(std::span<const double> dependent,
                             const std::vector<std::span<const double>>& companions) {
  if (companions.empty()) throw ArityError("spatial regression needs at least one companion");
  const std::size_t n = dependent.size();
  for (const auto& c : companions) require_same_size(n, c.size(), "companion series");
  const std::size_t k = companions.size();
  if (n < k + 2)
    throw SizeError("spatial regression over " + std::to_string(k) +
                    " companion(s) needs at least " + std::to_string(k + 2) + " samples, got " +
                    std::to_string(n));

  Eigen::MatrixXd v(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k + 1));
  Eigen::VectorXd d(static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = static_cast<Eigen::Index>(r);
    v(row, 0) = 1.0;
    for (std::size_t j = 0; j < k; ++j) v(row, static_cast<Eigen::Index>(j + 1)) = companions[j][r];
    d(row) = dependent[r];
  }
  const auto ls = solve_least_squares(v, d);
  SpatialRegressor reg;
  reg.coeffs.assign(ls.solution.data(), ls.solution.data() + ls.solution.size());
  reg.degenerate = ls.rank_deficient;
  return reg;
}

double predict_spatial(const SpatialRegressor& regressor,
                       std::span<const double> companion_values) {
  require_same_size(regressor.companion_count(), companion_values.size(), "companion values");
  double sum = regressor.coeffs[0];
  for (std::size_t j = 0; j < companion_values.size(); ++j)
    sum += regressor.coeffs[j + 1] * companion_values[j];
  return sum;
}

double chi_squared(std::span<const double> actuals, std::span<const double> predictions,
                   double sigma2) {
  require_same_size(actuals.size(), predictions.size(), "chi-squared predictions");
  if (actuals.empty()) throw SizeError("chi-squared needs at least one sample");
  if (sigma2 < kVarianceFloor) {
    for (std::size_t i = 0; i < actuals.size(); ++i)
      if (std::abs(actuals[i] - predictions[i]) >= kVarianceFloor) return kChi2Infinite;
    return 0.0;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < actuals.size(); ++i) {
    const double r = actuals[i] - predictions[i];
    sum += r * r / sigma2;
  }
  return sum;
}

double fit_score(double chi2, long nu) {
  if (nu < 1) throw SizeError("degrees of freedom must be positive");
  if (!(chi2 >= 0.0)) throw SizeError("chi-squared must be non-negative");
  if (std::isinf(chi2)) return 0.0;
  return std::max(0.0, 1.0 - chi2 / static_cast<double>(nu));
}

FitTracker update_fit(FitTracker tracker, double error) {
  if (tracker.sigma2 < kVarianceFloor) {
    if (std::abs(error) >= kVarianceFloor) tracker.chi2 = kChi2Infinite;
  } else {
    tracker.chi2 += error * error / tracker.sigma2;
  }
  tracker.nu += 1;
  return tracker;
}

FitTracker temporal_tracker(const TemporalFilter& filter, std::span<const double> training) {
  const std::size_t p = filter.order();
  if (training.size() <= p) throw SizeError("training series shorter than the filter order");
  std::vector<double> actual;
  std::vector<double> predicted;
  std::vector<double> history(p);
  for (std::size_t t = p; t < training.size(); ++t) {
    for (std::size_t i = 0; i < p; ++i) history[i] = training[t - 1 - i];
    actual.push_back(training[t]);
    predicted.push_back(predict_temporal(filter, history));
  }
  FitTracker tracker;
  tracker.sigma2 = sample_variance(training);
  tracker.nu = static_cast<long>(training.size()) - 1;
  tracker.chi2 = chi_squared(actual, predicted, tracker.sigma2);
  return tracker;
}

FitTracker spatial_tracker(const SpatialRegressor& regressor,
                           std::span<const double> dependent,
                           const std::vector<std::span<const double>>& companions,
                           std::size_t skip) {
  const std::size_t n = dependent.size();
  if (skip >= n) throw SizeError("spatial tracker window is empty");
  for (const auto& c : companions) require_same_size(n, c.size(), "companion series");
  std::vector<double> actual;
  std::vector<double> predicted;
  std::vector<double> inputs(companions.size());
  for (std::size_t t = skip; t < n; ++t) {
    for (std::size_t j = 0; j < companions.size(); ++j) inputs[j] = companions[j][t];
    actual.push_back(dependent[t]);
    predicted.push_back(predict_spatial(regressor, inputs));
  }
  FitTracker tracker;
  tracker.sigma2 = sample_variance(dependent);
  tracker.nu = std::max<long>(1, static_cast<long>(n) - 1);
  tracker.chi2 = chi_squared(actual, predicted, tracker.sigma2);
  return tracker;
}

}  // namespace vsf
