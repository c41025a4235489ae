#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vsf/core.hpp"
#include "vsf/data_io.hpp"

namespace vsf {

/// Contents of a run config file.
///
/// Format: one `key = value` per line, `#` starts a comment, blank lines are
/// ignored. Keys without a prefix are SimConfig fields under their own names
/// (`epsilon` is accepted for error_threshold). `data.*` keys control
/// loading, `synth.*` keys describe a synthetic dataset used when no data
/// file is given. Unknown keys and repeated keys are ConfigErrors, except
/// `synth.link` which may repeat.
///
///   data.layout     wide | long                      (wide)
///   data.gaps       interpolate | reject             (interpolate)
///   data.max_run    longest interpolated gap run     (3)
///   synth.nodes, synth.length, synth.seed, synth.unit
///   synth.base      sine | ar1 | walk                (sine)
///   synth.period, synth.amplitude, synth.offset, synth.drift, synth.phase,
///   synth.noise_std, synth.coeff, synth.start, synth.step_std
///   synth.link      source target slope intercept [noise_std]
struct RunConfig {
  SimConfig sim;
  CsvLayout layout = CsvLayout::Wide;
  GapPolicy gaps = Interpolate{};
  std::optional<SyntheticSpec> synthetic;
};

/// Sets one SimConfig field from text. Throws ConfigError for unknown keys
/// and unparseable values; range checks are left to validate_config.
void set_sim_key(SimConfig& cfg, const std::string& key, const std::string& value);

/// Names accepted by set_sim_key, canonical spelling.
std::vector<std::string> sim_keys();

RunConfig parse_config(std::istream& in, const std::string& origin = "config");
RunConfig load_config_file(const std::string& path);

/// Canonical `key = value` form of every SimConfig field.
void write_sim_config(std::ostream& out, const SimConfig& cfg);

}  // namespace vsf
