#include "vsf/core.hpp"

#include <algorithm>
#include <sstream>

namespace vsf {

SensorTrace SensorTrace::from_values(std::string node_id, std::vector<double> values,
                                     std::string unit) {
  SensorTrace t;
  t.node_id = std::move(node_id);
  t.unit = std::move(unit);
  t.valid.assign(values.size(), true);
  t.values = std::move(values);
  return t;
}

bool SensorTrace::has_gaps() const {
  return std::find(valid.begin(), valid.end(), false) != valid.end();
}

std::size_t SensorTrace::gap_count() const {
  return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), false));
}

SensorTrace window(const SensorTrace& trace, std::size_t start, std::size_t len,
                   bool allow_gaps) {
  if (start > trace.size() || len > trace.size() - start) {
    std::ostringstream msg;
    msg << "window [" << start << ", " << start + len << ") exceeds trace '"
        << trace.node_id << "' of length " << trace.size();
    throw RangeError(msg.str());
  }
  SensorTrace out;
  out.node_id = trace.node_id;
  out.unit = trace.unit;
  out.values.assign(trace.values.begin() + static_cast<std::ptrdiff_t>(start),
                    trace.values.begin() + static_cast<std::ptrdiff_t>(start + len));
  out.valid.assign(trace.valid.begin() + static_cast<std::ptrdiff_t>(start),
                   trace.valid.begin() + static_cast<std::ptrdiff_t>(start + len));
  if (!allow_gaps && out.has_gaps()) {
    auto it = std::find(out.valid.begin(), out.valid.end(), false);
    throw GapError("gap at slot " + std::to_string(start + static_cast<std::size_t>(
                                                               it - out.valid.begin())) +
                   " of trace '" + trace.node_id + "'");
  }
  return out;
}

std::size_t Dataset::length() const {
  if (traces.empty()) return 0;
  const std::size_t n = traces.front().size();
  for (const auto& t : traces) {
    if (t.size() != n || t.valid.size() != n)
      throw SizeError("trace '" + t.node_id + "' length differs from the dataset length");
  }
  return n;
}

bool Dataset::has_gaps() const {
  return std::any_of(traces.begin(), traces.end(),
                     [](const SensorTrace& t) { return t.has_gaps(); });
}

std::vector<std::string> Dataset::node_ids() const {
  std::vector<std::string> ids;
  ids.reserve(traces.size());
  for (const auto& t : traces) ids.push_back(t.node_id);
  return ids;
}

const char* to_string(Phase phase) {
  switch (phase) {
    case Phase::Training: return "training";
    case Phase::Operational: return "operational";
    case Phase::Revalidation: return "revalidation";
  }
  return "?";
}

ErrorKind classify(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return ErrorKind::Config;
  if (dynamic_cast<const DataError*>(&e) || dynamic_cast<const GapError*>(&e) ||
      dynamic_cast<const SizeError*>(&e) || dynamic_cast<const RangeError*>(&e) ||
      dynamic_cast<const ArityError*>(&e) || dynamic_cast<const ComparisonError*>(&e))
    return ErrorKind::Data;
  if (dynamic_cast<const IoError*>(&e)) return ErrorKind::Io;
  return ErrorKind::Internal;
}

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config: return "config error";
    case ErrorKind::Data: return "data error";
    case ErrorKind::Io: return "I/O error";
    case ErrorKind::Internal: return "internal error";
  }
  return "?";
}

const char* to_string(EnergyMode mode) {
  switch (mode) {
    case EnergyMode::EventsOnly: return "events_only";
    case EnergyMode::Full: return "full";
  }
  return "?";
}

EnergyMode parse_energy_mode(const std::string& text) {
  if (text == "events_only" || text == "EventsOnly") return EnergyMode::EventsOnly;
  if (text == "full" || text == "Full") return EnergyMode::Full;
  throw ConfigError("unknown energy mode '" + text + "' (expected events_only or full)");
}

std::string ConfigCheck::describe() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) out << '\n';
    out << violations[i].field << ": " << violations[i].message;
  }
  return out.str();
}

ConfigCheck validate_config(const SimConfig& cfg) {
  ConfigCheck check{cfg, {}};
  auto fail = [&](const char* field, std::string message) {
    check.violations.push_back({field, std::move(message)});
  };

  if (cfg.filter_order < 1) fail("filter_order", "p must be at least 1");
  if (!(cfg.learning_rate > 0.0)) fail("learning_rate", "mu must be positive");
  if (!(cfg.error_threshold >= 0.0)) fail("error_threshold", "epsilon must be non-negative");
  if (!(cfg.delta_min >= 0.0 && cfg.delta_min <= 1.0))
    fail("delta_min", "delta_min must lie in [0, 1]");
  if (cfg.max_companions < 1) fail("max_companions", "max_companions must be at least 1");
  if (cfg.training_len <= cfg.filter_order) fail("training_len", "T_p must exceed p");
  else if (cfg.training_len - cfg.filter_order < cfg.max_companions + 2)
    fail("training_len", "T_p - p must be at least max_companions + 2 regression rows");
  if (cfg.operational_len < 1) fail("operational_len", "O_p must be positive");
  if (cfg.revalidation_len < 1) fail("revalidation_len", "R_p must be positive");
  if (cfg.revalidation_len >= cfg.training_len)
    fail("revalidation_len", "R_p must be less than T_p");
  if (!(cfg.slot_duration > 0.0)) fail("slot_duration", "slot duration must be positive");
  if (!(cfg.awake_fraction > 0.0 && cfg.awake_fraction <= 1.0))
    fail("awake_fraction", "awake_fraction must lie in (0, 1]");
  if (!(cfg.switch_duration >= 0.0))
    fail("switch_duration", "switch duration must be non-negative");
  if (!(cfg.retrain_error_limit > 0.0))
    fail("retrain_error_limit", "retrain_error_limit must be positive");
  if (!(cfg.rotation_band >= 0.0)) fail("rotation_band", "rotation band must be non-negative");
  return check;
}

const SimConfig& require_valid(const SimConfig& cfg) {
  auto check = validate_config(cfg);
  if (!check.ok()) throw ConfigError(check.describe());
  return cfg;
}

}  // namespace vsf
