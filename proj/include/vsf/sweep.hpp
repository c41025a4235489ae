#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vsf/core.hpp"
#include "vsf/sim.hpp"

namespace vsf {

/// One `--grid` argument: `key=v1,v2,...`. Keys are SimConfig fields (and
/// `epsilon`); `window` takes `O_p:R_p` pairs.
struct GridAxis {
  std::string key;
  std::vector<std::string> values;
};

/// Throws ConfigError on malformed text or an empty value list.
GridAxis parse_grid_axis(const std::string& text);

struct SweepPoint {
  std::vector<std::pair<std::string, std::string>> settings;  // axis key, value
  SimConfig config;
  std::string error;  // set when the point could not be built or validated
};

/// Cartesian product of the axes, first axis slowest. Invalid points are
/// kept with `error` set so that they can be reported in place.
std::vector<SweepPoint> expand_grid(const SimConfig& base, const std::vector<GridAxis>& axes);

/// Headline numbers of one run. Errors cover evaluation slots of all nodes.
struct RunSummary {
  double mean_abs_error = 0.0;
  double error_std = 0.0;
  double type1_mean_abs_error = 0.0;
  std::uint64_t type1_slots = 0;
  double total_energy_uj = 0.0;
  /// Nodes that ever were a TypeI or its first companion.
  double paired_energy_uj = 0.0;
  std::uint64_t transmissions = 0;
  std::vector<double> node_energy_uj;
  std::vector<std::uint64_t> node_transmissions;

  friend bool operator==(const RunSummary&, const RunSummary&) = default;
};
RunSummary summarize_run(const SimReport& report);

struct SweepRow {
  SweepPoint point;
  std::optional<RunSummary> summary;
  std::string error;
  ErrorKind error_kind = ErrorKind::Config;

  bool ok() const { return summary.has_value(); }
};

/// Runs every point on the same dataset. Rows follow grid order whatever
/// the completion order; a failing point does not stop the others.
std::vector<SweepRow> run_sweep_serial(const std::vector<SweepPoint>& points,
                                       const Dataset& dataset);
std::vector<SweepRow> run_sweep_parallel(const std::vector<SweepPoint>& points,
                                         const Dataset& dataset);
inline std::vector<SweepRow> run_sweep(const std::vector<SweepPoint>& points,
                                       const Dataset& dataset) {
  return run_sweep_parallel(points, dataset);
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows,
                     const std::vector<std::string>& node_ids);

}  // namespace vsf
