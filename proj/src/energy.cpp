#include "vsf/energy.hpp"

#include <limits>
#include <string>

namespace vsf {
namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

EnergyParams EnergyParams::from_config(const SimConfig& cfg) {
  EnergyParams p;
  p.switch_duration_s = cfg.switch_duration;
  p.slot_duration_s = cfg.slot_duration;
  p.awake_fraction = cfg.awake_fraction;
  return p;
}

double EnergyLedger::grand_total_uj() const {
  double sum = 0.0;
  for (const auto& n : nodes) sum += n.total_uj();
  return sum;
}

void tally_slot(EnergyLedger& ledger, NodeIndex node, ActionKind action, NodeState state,
                std::uint32_t switches, const EnergyParams& params, EnergyMode mode) {
  if (node >= ledger.nodes.size())
    throw SizeError("energy ledger has no node " + std::to_string(node));
  if (mode != EnergyMode::EventsOnly && mode != EnergyMode::Full)
    throw ConfigError("unknown energy mode");

  NodeEnergy& e = ledger.nodes[node];
  ++e.slots;
  if (action != ActionKind::Slept) {
    e.sensing_uj += params.sense_uj;
    ++e.senses;
  }
  if (action == ActionKind::Transmitted) {
    e.tx_uj += params.tx_msg_uj;
    ++e.transmissions;
  }
  e.switches += switches;
  if (mode == EnergyMode::EventsOnly) return;

  if (state == NodeState::Active) {
    e.mode_uj += params.active_uw * params.slot_duration_s * params.awake_fraction +
                 params.lpm_uw * params.slot_duration_s * (1.0 - params.awake_fraction);
  } else {
    e.mode_uj += params.lpm_uw * params.slot_duration_s;
  }
  e.switch_uj += params.switch_uw * params.switch_duration_s * switches;
}

EnergySummary summarize(const EnergyLedger& ledger,
                        const std::vector<std::pair<NodeIndex, NodeIndex>>& pairs,
                        const EnergyLedger* baseline) {
  EnergySummary s;
  for (const auto& n : ledger.nodes) s.node_total_uj.push_back(n.total_uj());
  s.grand_total_uj = ledger.grand_total_uj();

  if (baseline) {
    if (baseline->nodes.size() != ledger.nodes.size())
      throw ComparisonError("ledgers cover different node counts");
    std::vector<double> base;
    std::vector<double> ratio;
    for (std::size_t i = 0; i < ledger.nodes.size(); ++i) {
      if (baseline->nodes[i].slots != ledger.nodes[i].slots)
        throw ComparisonError("ledgers cover different slot ranges for node " +
                              std::to_string(i));
      base.push_back(baseline->nodes[i].total_uj());
      ratio.push_back(base.back() > 0.0 ? s.node_total_uj[i] / base.back()
                                        : (s.node_total_uj[i] > 0.0 ? kInf : 1.0));
    }
    const double base_total = baseline->grand_total_uj();
    s.grand_ratio = base_total > 0.0 ? s.grand_total_uj / base_total
                                     : (s.grand_total_uj > 0.0 ? kInf : 1.0);
    s.baseline_node_total_uj = std::move(base);
    s.node_ratio = std::move(ratio);
  }

  for (const auto& [type1, companion] : pairs) {
    if (type1 >= ledger.nodes.size() || companion >= ledger.nodes.size())
      throw SizeError("energy pair refers to an unknown node");
    PairEnergy pe{type1, companion,
                  ledger.nodes[type1].total_uj() + ledger.nodes[companion].total_uj(),
                  std::nullopt, std::nullopt};
    if (baseline) {
      pe.baseline_uj =
          baseline->nodes[type1].total_uj() + baseline->nodes[companion].total_uj();
      pe.ratio = *pe.baseline_uj > 0.0 ? pe.combined_uj / *pe.baseline_uj
                                       : (pe.combined_uj > 0.0 ? kInf : 1.0);
    }
    s.pairs.push_back(pe);
  }
  return s;
}

}  // namespace vsf
