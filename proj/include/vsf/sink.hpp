#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "vsf/core.hpp"
#include "vsf/engine.hpp"
#include "vsf/node.hpp"

namespace vsf {

enum class SinkMode {
  Vsf,          // dormancy, companions, dual prediction
  BaselineLms,  // every node active with dual prediction, no companions
  NoVsf,        // every node reports every slot
};
const char* to_string(SinkMode mode);

using CommandBatch = std::vector<std::vector<Command>>;  // per node, in order

/// Sink-side state machine. Each slot the simulation hands it the messages
/// that arrived (nothing else about the nodes), then asks for the commands
/// that take effect from the next slot.
class Sink {
 public:
  Sink(SimConfig cfg, std::size_t node_count, SinkMode mode = SinkMode::Vsf,
       std::optional<RoleAssignment> pinned_roles = std::nullopt);

  /// Commands for slot 0: every node reports for the training period.
  CommandBatch initial_commands() const;

  /// Reconstructs every node's value for the current slot.
  struct SlotResult {
    std::vector<double> values;
    std::vector<Source> sources;
  };
  SlotResult process_slot(std::span<const std::optional<double>> messages);

  /// Closes the slot; at a phase boundary runs the end-of-phase work and
  /// returns the commands for the next phase.
  CommandBatch end_slot();

  Phase phase() const { return schedule_.phase; }
  const PhaseSchedule& schedule() const { return schedule_; }
  /// False for phases that last until the data runs out.
  bool phase_bounded() const;
  std::uint64_t phase_serial() const { return phase_serial_; }
  /// Whether the sink expects `node` to be awake in the current phase.
  bool expects_active(NodeIndex node) const;

  const std::vector<VirtualSensor>& sensors() const { return sensors_; }
  const RoleAssignment& assignment() const { return assignment_; }
  const std::vector<RoleAssignment>& assignment_history() const { return history_; }
  const std::vector<RevalidationDecision>& decisions() const { return decisions_; }
  const std::vector<std::uint64_t>& active_slots() const { return active_slots_; }
  std::size_t retrain_count() const { return retrains_; }

 private:
  WindowView reference_view(std::vector<std::vector<double>>& columns) const;
  void remember_row(std::span<const std::optional<double>> messages);
  void finish_training(CommandBatch& commands);
  void finish_operational(CommandBatch& commands);
  void finish_revalidation(CommandBatch& commands);
  void install_assignment(RoleAssignment next, const WindowView& reference, bool keep_trackers);
  void operational_commands(CommandBatch& commands) const;
  FilterState filter_state(NodeIndex node) const;

  SimConfig cfg_;
  SinkMode mode_;
  std::optional<RoleAssignment> pinned_;
  PhaseSchedule schedule_;
  std::uint64_t phase_serial_ = 0;
  std::vector<VirtualSensor> sensors_;
  RoleAssignment assignment_;
  std::vector<RoleAssignment> history_;
  std::vector<RevalidationDecision> decisions_;
  std::vector<std::uint64_t> active_slots_;
  std::deque<std::vector<double>> reference_;  // fully observed rows, oldest first
  RevalidationTally tally_;
  bool trained_once_ = false;
  std::size_t retrains_ = 0;
};

}  // namespace vsf
