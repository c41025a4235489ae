#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vsf/core.hpp"
#include "vsf/energy.hpp"
#include "vsf/engine.hpp"
#include "vsf/node.hpp"
#include "vsf/sink.hpp"

namespace vsf {

/// Lossless zero-delay star channel. The only path from nodes to the sink.
class MessageChannel {
 public:
  explicit MessageChannel(std::size_t nodes) : inbox_(nodes) {}

  void send(NodeIndex from, double value);
  /// Hands over this slot's messages and empties the channel.
  std::vector<std::optional<double>> drain();
  std::uint64_t delivered() const { return delivered_; }

 private:
  std::vector<std::optional<double>> inbox_;
  std::uint64_t delivered_ = 0;
};

struct SlotRecord {
  std::size_t slot = 0;
  NodeIndex node = 0;
  Phase phase = Phase::Training;
  Role role = Role::TypeII;
  double actual = 0.0;
  double reconstructed = 0.0;
  double abs_error = 0.0;
  Source source = Source::Measured;
  ActionKind action = ActionKind::Slept;
  bool suppression_mode = false;
};

/// Error figures cover the evaluation slots, i.e. everything after the
/// first training period.
struct NodeSummary {
  double mean_abs_error = 0.0;
  double max_abs_error = 0.0;
  std::uint64_t transmissions = 0;
  std::uint64_t suppressions = 0;
  std::uint64_t dormant_slots = 0;
  std::uint64_t senses = 0;
  std::uint64_t evaluated_slots = 0;
  /// Slots predicted while the node slept, and their mean absolute error.
  std::uint64_t type1_slots = 0;
  double type1_mean_abs_error = 0.0;
};

struct PhaseSpan {
  Phase phase = Phase::Training;
  std::size_t start = 0;
  std::size_t length = 0;
  bool partial = false;

  friend bool operator==(const PhaseSpan&, const PhaseSpan&) = default;
};

struct SimReport {
  SimConfig config;
  SinkMode mode = SinkMode::Vsf;
  std::vector<std::string> node_ids;
  std::size_t slot_count = 0;
  std::size_t evaluation_start = 0;
  std::vector<SlotRecord> records;  // slot-major, nodes in index order
  std::vector<NodeSummary> nodes;
  EnergyLedger ledger;
  EnergySummary energy;
  std::vector<PhaseSpan> timeline;
  /// Every (TypeI, first companion) pairing that was ever in force.
  std::vector<std::pair<NodeIndex, NodeIndex>> companion_pairs;
  std::size_t assignments = 0;
  std::size_t revalidations = 0;
  std::size_t retrains = 0;
  std::size_t max_type1 = 0;
  std::vector<std::string> notes;

  const SlotRecord& record(std::size_t slot, NodeIndex node) const {
    return records[slot * node_ids.size() + node];
  }
};

/// What observers see. `messages` is exactly what the sink received.
struct SlotView {
  std::size_t slot = 0;
  std::span<const PhysicalNode> nodes;
  const Sink* sink = nullptr;
  std::span<const NodeAction> actions;
  std::span<const std::optional<double>> messages;
};
using SlotObserver = std::function<void(const SlotView&)>;

struct SimOptions {
  /// Fixed roles instead of greedy selection and rotation.
  std::optional<RoleAssignment> pinned_roles;
  /// Called at every slot boundary after commands are delivered, before
  /// nodes step. `actions` and `messages` are empty here.
  SlotObserver at_boundary;
  /// Called after the sink has processed the slot.
  SlotObserver after_slot;
};

/// Full VSF protocol: training, then operational/revalidation cycles with
/// retraining on demand, until the data runs out. With cfg.no_vsf every node
/// reports every slot instead.
SimReport run_simulation(const SimConfig& cfg, const Dataset& dataset,
                         const SimOptions& options = {});

/// Dual-prediction LMS baseline: the same training fit, then every node stays
/// active in suppression mode for the rest of the run.
SimReport run_baseline_lms(const SimConfig& cfg, const Dataset& dataset,
                           const SimOptions& options = {});

struct ComparisonRow {
  std::string label;  // node id, pair label, or "total"
  double vsf_energy_uj = 0.0;
  double baseline_energy_uj = 0.0;
  double energy_ratio = 1.0;
  std::uint64_t vsf_transmissions = 0;
  std::uint64_t baseline_transmissions = 0;
  std::uint64_t vsf_senses = 0;
  std::uint64_t baseline_senses = 0;
  double vsf_mean_abs_error = 0.0;
  double baseline_mean_abs_error = 0.0;
};

struct Comparison {
  std::vector<ComparisonRow> rows;  // nodes, then pairs, then "total"
  const ComparisonRow& total() const { return rows.back(); }
};

/// Side-by-side energy, counts and errors. Throws ComparisonError when the
/// reports cover different nodes or slot ranges.
Comparison compare(const SimReport& vsf, const SimReport& baseline);

}  // namespace vsf
