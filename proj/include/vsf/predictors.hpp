#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "vsf/core.hpp"

namespace vsf {

/// Tapped-delay-line predictor over a signal's own past. `coeffs[i]` weights
/// the reading i+1 slots back, so histories are always most-recent-first.
struct TemporalFilter {
  std::vector<double> coeffs;
  double learning_rate = 0.5;
  bool normalize_lms = true;
  /// Set when the training fit fell back to the minimum-norm solution.
  bool degenerate = false;

  std::size_t order() const { return coeffs.size(); }

  friend bool operator==(const TemporalFilter&, const TemporalFilter&) = default;
};

/// Intercept plus one slope per companion: coeffs = [b0, b1, ..., bk].
struct SpatialRegressor {
  std::vector<double> coeffs;
  bool degenerate = false;

  std::size_t companion_count() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }

  friend bool operator==(const SpatialRegressor&, const SpatialRegressor&) = default;
};

/// Running goodness-of-fit state: chi2 accumulates squared residuals scaled
/// by the training-window variance, nu counts degrees of freedom.
struct FitTracker {
  double chi2 = 0.0;
  long nu = 1;
  double sigma2 = 0.0;

  double score() const;

  friend bool operator==(const FitTracker&, const FitTracker&) = default;
};

inline constexpr double kVarianceFloor = 1e-12;
inline constexpr double kLmsRegularizer = 1e-12;
inline constexpr double kChi2Infinite = std::numeric_limits<double>::infinity();

/// Pushes `value` to the front of a most-recent-first delay line and trims
/// it to `order` entries.
void push_history(std::vector<double>& history, double value, std::size_t order);

/// Sample variance (n - 1 denominator); 0 for fewer than two samples.
double sample_variance(std::span<const double> values);

/// Least-squares transversal filter of the given order over a gap-free
/// training series (normal-equation solution, minimum-norm when singular).
TemporalFilter fit_temporal(std::span<const double> training, std::size_t order,
                            double learning_rate, bool normalize_lms = true);
TemporalFilter fit_temporal(const SensorTrace& training, std::size_t order,
                            double learning_rate, bool normalize_lms = true);

/// Sum of alpha_i * history[i-1]; history is most recent first.
double predict_temporal(const TemporalFilter& filter, std::span<const double> history);

/// One (N)LMS step driven by e = actual - predicted. `input` is the history
/// the prediction was made from.
TemporalFilter lms_update(const TemporalFilter& filter, std::span<const double> input,
                          double actual, double predicted);

/// Ordinary least squares of `dependent` on an intercept plus each companion
/// series. Companion spans must all match the dependent's length.
SpatialRegressor fit_spatial(std::span<const double> dependent,
                             const std::vector<std::span<const double>>& companions);

double predict_spatial(const SpatialRegressor& regressor,
                       std::span<const double> companion_values);

/// Sum of squared residuals over sigma2. A variance under kVarianceFloor
/// yields 0 for all-zero residuals and +inf otherwise.
double chi_squared(std::span<const double> actuals, std::span<const double> predictions,
                   double sigma2);

/// max(0, 1 - chi2 / nu).
double fit_score(double chi2, long nu);

/// Folds one more residual into the tracker and adds a degree of freedom.
FitTracker update_fit(FitTracker tracker, double error);

/// In-sample temporal fit quality over the training series: residuals of the
/// T_p - p one-step predictions, sigma2 over the whole series, nu = T_p - 1.
FitTracker temporal_tracker(const TemporalFilter& filter, std::span<const double> training);

/// Spatial fit quality of `regressor` on rows [skip, n) of the window,
/// sigma2 over the whole dependent window, nu = n - 1.
FitTracker spatial_tracker(const SpatialRegressor& regressor,
                           std::span<const double> dependent,
                           const std::vector<std::span<const double>>& companions,
                           std::size_t skip);

}  // namespace vsf
