#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "vsf/core.hpp"
#include "vsf/node.hpp"

namespace vsf {

/// Radio and sensing costs of a low-power node (128 B message at 0 dBm).
/// Energies are kept in microjoules and powers in microwatts so that the
/// per-event costs add up exactly.
struct EnergyParams {
  std::size_t msg_size_bytes = 128;
  double tx_power_dbm = 0.0;
  double tx_msg_uj = 341.0;
  double sense_uj = 330.0;
  double active_uw = 4898.0;
  double lpm_uw = 144.0;
  double switch_uw = 16.0;
  double switch_duration_s = 0.010;
  double slot_duration_s = 30.0;
  double awake_fraction = 1.0;

  static EnergyParams from_config(const SimConfig& cfg);
};

struct NodeEnergy {
  double sensing_uj = 0.0;
  double tx_uj = 0.0;
  double mode_uj = 0.0;
  double switch_uj = 0.0;
  std::uint64_t senses = 0;
  std::uint64_t transmissions = 0;
  std::uint64_t switches = 0;
  std::uint64_t slots = 0;

  double total_uj() const { return sensing_uj + tx_uj + mode_uj + switch_uj; }
  double total_j() const { return total_uj() / 1e6; }

  friend bool operator==(const NodeEnergy&, const NodeEnergy&) = default;
};

struct EnergyLedger {
  std::vector<NodeEnergy> nodes;

  explicit EnergyLedger(std::size_t node_count = 0) : nodes(node_count) {}
  double grand_total_uj() const;

  friend bool operator==(const EnergyLedger&, const EnergyLedger&) = default;
};

/// Charges one node's slot. EventsOnly counts sensing and transmissions
/// only; Full adds mode residency and state-switch draw.
void tally_slot(EnergyLedger& ledger, NodeIndex node, ActionKind action, NodeState state,
                std::uint32_t switches, const EnergyParams& params, EnergyMode mode);

struct PairEnergy {
  NodeIndex type1 = 0;
  NodeIndex companion = 0;
  double combined_uj = 0.0;
  std::optional<double> baseline_uj;
  std::optional<double> ratio;
};

struct EnergySummary {
  std::vector<double> node_total_uj;
  std::vector<PairEnergy> pairs;
  double grand_total_uj = 0.0;
  std::optional<std::vector<double>> baseline_node_total_uj;
  std::optional<std::vector<double>> node_ratio;
  std::optional<double> grand_ratio;
};

/// Per-node and pairwise totals. With a baseline ledger, adds VSF/baseline
/// ratios; the ledgers must cover the same nodes and slot counts.
EnergySummary summarize(const EnergyLedger& ledger,
                        const std::vector<std::pair<NodeIndex, NodeIndex>>& pairs,
                        const EnergyLedger* baseline = nullptr);

}  // namespace vsf
