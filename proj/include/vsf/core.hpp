#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace vsf {

// Error classes. Every failure in the library is one of these; the CLI maps
// each class to a stable exit code.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RangeError : Error { using Error::Error; };
struct GapError : Error { using Error::Error; };
struct SizeError : Error { using Error::Error; };
struct ArityError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct ProtocolError : Error { using Error::Error; };
struct StateError : Error { using Error::Error; };
struct ComparisonError : Error { using Error::Error; };
struct DataError : Error { using Error::Error; };
struct LoadError : DataError { using DataError::DataError; };
struct AlignmentError : DataError { using DataError::DataError; };
struct SpecError : DataError { using DataError::DataError; };
struct IoError : Error { using Error::Error; };

/// Coarse error class, the unit of the CLI's exit-code contract.
enum class ErrorKind { Config, Data, Io, Internal };
ErrorKind classify(const std::exception& e);
const char* to_string(ErrorKind kind);

/// Position of a node in its dataset. Tie-breaking everywhere is by this
/// index, so dataset column order is significant.
using NodeIndex = std::size_t;

/// Readings of one physical sensor, one per timeslot. `valid[i] == false`
/// marks a gap; the value stored at a gap slot is meaningless.
struct SensorTrace {
  std::string node_id;
  std::string unit;
  std::vector<double> values;
  std::vector<bool> valid;

  static SensorTrace from_values(std::string node_id, std::vector<double> values,
                                 std::string unit = {});

  std::size_t size() const { return values.size(); }
  bool has_gaps() const;
  std::size_t gap_count() const;

  friend bool operator==(const SensorTrace&, const SensorTrace&) = default;
};

/// Contiguous sub-trace [start, start + len). Throws RangeError when the
/// window does not fit and GapError when it covers a gap and gaps are not
/// allowed.
SensorTrace window(const SensorTrace& trace, std::size_t start, std::size_t len,
                   bool allow_gaps = false);

/// A set of equally long traces sharing slot indexing.
struct Dataset {
  std::vector<SensorTrace> traces;

  std::size_t node_count() const { return traces.size(); }
  /// Common length; 0 for an empty dataset. Throws SizeError if ragged.
  std::size_t length() const;
  bool has_gaps() const;
  std::vector<std::string> node_ids() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

enum class Phase { Training, Operational, Revalidation };
const char* to_string(Phase phase);

enum class EnergyMode { EventsOnly, Full };
const char* to_string(EnergyMode mode);
EnergyMode parse_energy_mode(const std::string& text);

struct SimConfig {
  std::size_t filter_order = 4;
  double learning_rate = 0.5;
  double error_threshold = 0.5;
  double delta_min = 0.5;
  std::size_t max_companions = 1;
  std::size_t training_len = 100;
  std::size_t operational_len = 20;
  std::size_t revalidation_len = 5;
  double slot_duration = 30.0;
  EnergyMode energy_mode = EnergyMode::EventsOnly;
  double awake_fraction = 1.0;
  double switch_duration = 0.010;
  double retrain_error_limit = 2.0;
  std::uint64_t rng_seed = 1;
  bool normalize_lms = true;
  bool no_vsf = false;
  double rotation_band = 0.02;

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

struct ConfigViolation {
  std::string field;
  std::string message;
};

struct ConfigCheck {
  SimConfig config;
  std::vector<ConfigViolation> violations;

  bool ok() const { return violations.empty(); }
  /// All violations joined into one line per violation.
  std::string describe() const;
};

/// Checks every invariant and reports all violations, not just the first.
ConfigCheck validate_config(const SimConfig& cfg);

/// Throws ConfigError carrying every violation unless the config is valid.
const SimConfig& require_valid(const SimConfig& cfg);

}  // namespace vsf
