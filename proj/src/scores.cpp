#include "vsf/scores.hpp"

#include <cmath>
#include <exception>
#include <limits>

namespace vsf {

ScoreMatrix::ScoreMatrix(std::size_t nodes)
    : n(nodes), values(nodes * nodes, std::numeric_limits<double>::quiet_NaN()) {}

SpatialFit fit_spatial_window(std::span<const double> dependent,
                              const std::vector<std::span<const double>>& companions,
                              std::size_t skip) {
  if (skip >= dependent.size()) throw SizeError("regression window is empty");
  std::vector<std::span<const double>> rows;
  rows.reserve(companions.size());
  for (const auto& c : companions) {
    if (c.size() != dependent.size()) throw SizeError("companion window length mismatch");
    rows.push_back(c.subspan(skip));
  }
  SpatialFit fit;
  fit.regressor = fit_spatial(dependent.subspan(skip), rows);
  fit.tracker = spatial_tracker(fit.regressor, dependent, companions, skip);
  return fit;
}

double pair_score(std::span<const double> dependent, std::span<const double> companion,
                  std::size_t skip) {
  return fit_spatial_window(dependent, {companion}, skip).tracker.score();
}

namespace {

void check_window(const WindowView& window) {
  for (const auto& column : window)
    if (column.size() != window.front().size())
      throw SizeError("score window columns differ in length");
}

}  // namespace

ScoreMatrix pairwise_scores_serial(const WindowView& window, std::size_t skip) {
  check_window(window);
  const std::size_t n = window.size();
  ScoreMatrix scores(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) scores.at(i, j) = pair_score(window[i], window[j], skip);
  return scores;
}

ScoreMatrix pairwise_scores_parallel(const WindowView& window, std::size_t skip) {
  check_window(window);
  const std::size_t n = window.size();
  ScoreMatrix scores(n);
  const auto pairs = static_cast<long long>(n * n);
  std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic, 4)
  for (long long idx = 0; idx < pairs; ++idx) {
    const auto i = static_cast<std::size_t>(idx) / n;
    const auto j = static_cast<std::size_t>(idx) % n;
    if (i == j) continue;
    try {
      scores.values[static_cast<std::size_t>(idx)] = pair_score(window[i], window[j], skip);
    } catch (...) {
#pragma omp critical(vsf_scores_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return scores;
}

}  // namespace vsf
