#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vsf/core.hpp"
#include "vsf/predictors.hpp"
#include "vsf/scores.hpp"

namespace vsf {

/// TypeI: the physical sensor is dormant and the sink predicts it from its own
/// past and its companions. TypeII: the sensor is active and suppresses
/// predictable readings.
enum class Role { TypeI, TypeII };
enum class Source { Measured, Predicted };

const char* to_string(Role role);
const char* to_string(Source source);

// ---------------------------------------------------------------------------
// Phase machine

struct PhaseSchedule {
  std::size_t training_len = 0;
  std::size_t operational_len = 0;
  std::size_t revalidation_len = 0;
  Phase phase = Phase::Training;
  std::size_t phase_slot = 0;

  static PhaseSchedule from_config(const SimConfig& cfg);

  std::size_t current_length() const;
  bool at_boundary() const { return phase_slot == current_length(); }

  friend bool operator==(const PhaseSchedule&, const PhaseSchedule&) = default;
};

enum class RevalidationOutcome { Continue, Retrain };
const char* to_string(RevalidationOutcome outcome);

/// Training -> Operational -> Revalidation -> (Operational | Training).
/// Throws StateError mid-phase, when a revalidation ends without an outcome,
/// or when an outcome is supplied outside revalidation.
PhaseSchedule advance_phase(PhaseSchedule schedule,
                            std::optional<RevalidationOutcome> outcome = std::nullopt);

// ---------------------------------------------------------------------------
// Roles and companions

struct RoleAssignment {
  std::vector<Role> roles;
  /// Companions per node, best first; empty for TypeII nodes.
  std::vector<std::vector<NodeIndex>> companions;
  std::uint64_t rotation_counter = 0;

  static RoleAssignment all_type2(std::size_t nodes);

  std::size_t node_count() const { return roles.size(); }
  std::size_t type1_count() const;
  /// Throws StateError if a TypeI node lacks companions or a companion is
  /// not TypeII.
  void check() const;

  /// Roles and companions only; the counter is bookkeeping.
  bool same_roles(const RoleAssignment& other) const {
    return roles == other.roles && companions == other.companions;
  }

  friend bool operator==(const RoleAssignment&, const RoleAssignment&) = default;
};

/// Scores closer than this are an exact tie, broken by node index.
inline constexpr double kScoreTie = 1e-9;

/// Greedy role assignment maximizing the number of TypeI nodes. Each round
/// takes the best (dependent, companion) pair still admissible: dependent
/// unassigned, companion not TypeI, score >= delta_min. Among pairs within
/// `band` of the best score, the dependent with more active slots wins;
/// remaining ties go to the lower companion index, then the lower dependent
/// index. Extra companions are attached afterwards in descending score order
/// until a node has `max_companions`.
RoleAssignment greedy_assign(const ScoreMatrix& scores, double delta_min,
                             std::size_t max_companions,
                             std::span<const std::uint64_t> active_slots = {},
                             double band = 0.0);

/// Initial assignment from one training window. Throws ArityError for fewer
/// than two nodes.
RoleAssignment select_companions(const WindowView& training, std::size_t order,
                                 double delta_min, std::size_t max_companions);
RoleAssignment select_companions(const std::vector<SensorTrace>& training,
                                 std::size_t order, double delta_min,
                                 std::size_t max_companions);

/// Greedy re-selection on fresh scores with the fairness prior; bumps the
/// rotation counter.
RoleAssignment rotate_roles(const RoleAssignment& previous, const ScoreMatrix& fresh_scores,
                            std::span<const std::uint64_t> active_slots, double delta_min,
                            std::size_t max_companions, double band);

// ---------------------------------------------------------------------------
// Virtual sensors

struct VirtualSensor {
  NodeIndex node = 0;
  Role role = Role::TypeII;
  std::size_t order = 1;
  std::optional<TemporalFilter> temporal;
  std::optional<SpatialRegressor> spatial;
  FitTracker gamma_tracker;
  FitTracker delta_tracker;
  std::vector<NodeIndex> companions;
  std::vector<double> history;  // most recent first
  std::vector<double> reconstructed;
  std::vector<Source> sources;

  double gamma() const { return gamma_tracker.score(); }
  double delta() const { return spatial ? delta_tracker.score() : 0.0; }
  void record(double value, Source source);
};

/// (gamma * temporal + delta * spatial) / (gamma + delta); falls back to the
/// temporal prediction when the weights sum to less than 1e-12.
double hybrid_combine(double gamma, double delta, double temporal, double spatial);

/// Hybrid prediction for a TypeI sensor. The output is pushed onto the
/// sensor's history so the next call predicts one step further ahead.
double hybrid_predict(VirtualSensor& vs, std::span<const double> companion_values);

struct Reconstruction {
  double value = 0.0;
  Source source = Source::Measured;
};

/// A TypeII (or fully reporting) sensor's slot. A message is taken as the
/// truth and drives the same LMS step the node performed; without one the
/// filter's prediction stands in.
Reconstruction step_type2(VirtualSensor& vs, std::optional<double> message);

/// A TypeI sensor's slot in the operational phase. `companion_values` lines
/// up with vs.companions; a missing value is a ProtocolError.
double step_type1(VirtualSensor& vs, std::span<const std::optional<double>> companion_values);

// ---------------------------------------------------------------------------
// Revalidation

struct RevalidationTally {
  std::vector<double> abs_error_sum;
  std::size_t slots = 0;
};

/// One fully reported slot: LMS and gamma updates for every sensor, spatial
/// error and delta updates for TypeI sensors, and error bookkeeping for the
/// retrain decision.
void revalidation_step(std::vector<VirtualSensor>& sensors, std::span<const double> actuals,
                       RevalidationTally& tally);

struct RevalidationDecision {
  RevalidationOutcome outcome = RevalidationOutcome::Continue;
  std::vector<double> mean_abs_error;  // per sensor
  std::vector<double> refit_delta;     // per sensor; NaN for TypeII
  std::string reason;
};

/// Refits every TypeI regressor over `reference` (rows [skip, n)) and decides
/// whether the models still hold. Retrain when any sensor's mean absolute
/// revalidation error exceeds the limit, or any TypeI's tracked or refit
/// delta falls below delta_min.
RevalidationDecision refresh_and_decide(std::vector<VirtualSensor>& sensors,
                                        const WindowView& reference, std::size_t skip,
                                        const RevalidationTally& tally, const SimConfig& cfg);

/// Revalidation over a node-by-slot block of full readings with at least
/// R_p slots; the regressors are refit over that block.
RevalidationDecision revalidate(std::vector<VirtualSensor>& sensors,
                                const std::vector<std::vector<double>>& data,
                                const SimConfig& cfg);

}  // namespace vsf
