#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vsf/predictors.hpp"

namespace vsf {

/// Pairwise spatial fit scores: at(i, j) is the fit score of node i regressed
/// on node j alone. The diagonal is NaN.
struct ScoreMatrix {
  std::size_t n = 0;
  std::vector<double> values;

  ScoreMatrix() = default;
  explicit ScoreMatrix(std::size_t nodes);

  double at(std::size_t dependent, std::size_t companion) const {
    return values[dependent * n + companion];
  }
  double& at(std::size_t dependent, std::size_t companion) {
    return values[dependent * n + companion];
  }

  friend bool operator==(const ScoreMatrix&, const ScoreMatrix&) = default;
};

/// Columns of one node-by-slot window, one span per node, equal lengths.
using WindowView = std::vector<std::span<const double>>;

/// Fit of `dependent` on `companions` over rows [skip, n) plus its tracker.
struct SpatialFit {
  SpatialRegressor regressor;
  FitTracker tracker;
};
SpatialFit fit_spatial_window(std::span<const double> dependent,
                              const std::vector<std::span<const double>>& companions,
                              std::size_t skip);

/// Score of one ordered pair over rows [skip, n).
double pair_score(std::span<const double> dependent, std::span<const double> companion,
                  std::size_t skip);

/// Reference implementation: one pair after another.
ScoreMatrix pairwise_scores_serial(const WindowView& window, std::size_t skip);

/// OpenMP implementation over the n(n-1) ordered pairs. Produces exactly the
/// same matrix as the serial reference.
ScoreMatrix pairwise_scores_parallel(const WindowView& window, std::size_t skip);

inline ScoreMatrix pairwise_scores(const WindowView& window, std::size_t skip) {
  return pairwise_scores_parallel(window, skip);
}

}  // namespace vsf
