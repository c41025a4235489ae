#include "vsf/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vsf {

void MessageChannel::send(NodeIndex from, double value) {
  if (from >= inbox_.size()) throw SizeError("message from unknown node");
  if (inbox_[from]) throw ProtocolError("node sent twice in one slot");
  inbox_[from] = value;
}

std::vector<std::optional<double>> MessageChannel::drain() {
  std::vector<std::optional<double>> out(inbox_.size());
  out.swap(inbox_);
  for (const auto& m : out)
    if (m) ++delivered_;
  return out;
}

namespace {

void check_dataset(const SimConfig& cfg, const Dataset& dataset) {
  require_valid(cfg);
  if (dataset.node_count() == 0) throw SizeError("dataset has no nodes");
  const std::size_t length = dataset.length();
  const std::size_t needed = cfg.training_len + cfg.operational_len + cfg.revalidation_len;
  if (length < needed)
    throw SizeError("dataset has " + std::to_string(length) + " slots but T_p + O_p + R_p = " +
                    std::to_string(needed));
  if (dataset.has_gaps())
    throw GapError("dataset contains gaps; align it before simulating");
}

void summarize_nodes(SimReport& report, std::span<const PhysicalNode> nodes) {
  const std::size_t n = report.node_ids.size();
  report.nodes.assign(n, {});
  std::vector<double> type1_sum(n, 0.0);
  for (const auto& r : report.records) {
    auto& s = report.nodes[r.node];
    if (r.slot < report.evaluation_start) continue;
    ++s.evaluated_slots;
    s.mean_abs_error += r.abs_error;
    s.max_abs_error = std::max(s.max_abs_error, r.abs_error);
    if (r.role == Role::TypeI && r.action == ActionKind::Slept) {
      ++s.type1_slots;
      type1_sum[r.node] += r.abs_error;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto& s = report.nodes[i];
    if (s.evaluated_slots) s.mean_abs_error /= static_cast<double>(s.evaluated_slots);
    if (s.type1_slots) s.type1_mean_abs_error = type1_sum[i] / static_cast<double>(s.type1_slots);
    const auto& c = nodes[i].counters();
    s.transmissions = c.transmissions;
    s.suppressions = c.suppressions;
    s.dormant_slots = c.dormant_slots;
    s.senses = c.senses;
  }
}

SimReport run(const SimConfig& cfg, const Dataset& dataset, SinkMode mode,
              const SimOptions& options) {
  check_dataset(cfg, dataset);
  const std::size_t n = dataset.node_count();
  const std::size_t length = dataset.length();

  Sink sink(cfg, n, mode, mode == SinkMode::Vsf ? options.pinned_roles : std::nullopt);
  std::vector<PhysicalNode> nodes;
  nodes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) nodes.emplace_back(i, cfg.filter_order);
  MessageChannel channel(n);
  const EnergyParams params = EnergyParams::from_config(cfg);

  SimReport report;
  report.config = cfg;
  report.mode = mode;
  report.node_ids = dataset.node_ids();
  report.slot_count = length;
  report.evaluation_start = std::min(cfg.training_len, length);
  report.records.reserve(n * length);
  report.ledger = EnergyLedger(n);

  CommandBatch pending = sink.initial_commands();
  std::vector<NodeAction> actions(n);
  std::vector<std::uint64_t> switches_before(n, 0);
  std::uint64_t span_serial = std::numeric_limits<std::uint64_t>::max();
  std::size_t span_expected = 0;

  for (std::size_t t = 0; t < length; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      switches_before[i] = nodes[i].counters().switches;
      for (const auto& cmd : pending[i]) nodes[i].apply(cmd);
    }
    if (options.at_boundary) options.at_boundary(SlotView{t, nodes, &sink, {}, {}});

    if (sink.phase_serial() != span_serial) {
      span_serial = sink.phase_serial();
      span_expected = sink.phase_bounded() ? sink.schedule().current_length() : 0;
      report.timeline.push_back({sink.phase(), t, 0, false});
    }
    ++report.timeline.back().length;

    std::vector<bool> suppressing(n);
    std::vector<NodeState> states(n);
    for (std::size_t i = 0; i < n; ++i) {
      suppressing[i] = nodes[i].suppressing();
      states[i] = nodes[i].state();
      actions[i] = nodes[i].step(dataset.traces[i].values[t]);
      if (actions[i].kind == ActionKind::Transmitted) channel.send(i, actions[i].value);
    }
    const auto messages = channel.drain();
    const Phase phase = sink.phase();
    const auto roles = sink.assignment().roles;
    const auto result = sink.process_slot(messages);

    for (std::size_t i = 0; i < n; ++i) {
      SlotRecord r;
      r.slot = t;
      r.node = i;
      r.phase = phase;
      r.role = roles[i];
      r.actual = dataset.traces[i].values[t];
      r.reconstructed = result.values[i];
      r.abs_error = std::abs(r.actual - r.reconstructed);
      r.source = result.sources[i];
      r.action = actions[i].kind;
      r.suppression_mode = suppressing[i];
      report.records.push_back(r);
      const auto switched =
          static_cast<std::uint32_t>(nodes[i].counters().switches - switches_before[i]);
      tally_slot(report.ledger, i, r.action, states[i], switched, params, cfg.energy_mode);
    }
    if (options.after_slot) options.after_slot(SlotView{t, nodes, &sink, actions, messages});
    pending = sink.end_slot();
  }

  auto& last = report.timeline.back();
  if (span_expected && last.length < span_expected) {
    last.partial = true;
    report.notes.push_back(std::string("final ") + to_string(last.phase) +
                           " phase truncated after " + std::to_string(last.length) + " of " +
                           std::to_string(span_expected) + " slots");
  }

  for (const auto& a : sink.assignment_history()) {
    report.max_type1 = std::max(report.max_type1, a.type1_count());
    for (std::size_t i = 0; i < a.roles.size(); ++i) {
      if (a.roles[i] != Role::TypeI) continue;
      const NodeIndex c = a.companions[i].front();
      const bool seen = std::any_of(
          report.companion_pairs.begin(), report.companion_pairs.end(), [&](const auto& p) {
            return (p.first == i && p.second == c) || (p.first == c && p.second == i);
          });
      if (!seen) report.companion_pairs.emplace_back(i, c);
    }
  }
  report.assignments = sink.assignment_history().size();
  report.revalidations = sink.decisions().size();
  report.retrains = sink.retrain_count();
  if (mode == SinkMode::Vsf && !cfg.no_vsf && report.max_type1 == 0)
    report.notes.push_back("no TypeI virtual sensor was formed; every node stayed active");

  summarize_nodes(report, nodes);
  report.energy = summarize(report.ledger, report.companion_pairs);
  return report;
}

}  // namespace

SimReport run_simulation(const SimConfig& cfg, const Dataset& dataset,
                         const SimOptions& options) {
  return run(cfg, dataset, cfg.no_vsf ? SinkMode::NoVsf : SinkMode::Vsf, options);
}

SimReport run_baseline_lms(const SimConfig& cfg, const Dataset& dataset,
                           const SimOptions& options) {
  return run(cfg, dataset, cfg.no_vsf ? SinkMode::NoVsf : SinkMode::BaselineLms, options);
}

Comparison compare(const SimReport& vsf, const SimReport& baseline) {
  if (vsf.node_ids != baseline.node_ids)
    throw ComparisonError("reports cover different nodes");
  if (vsf.slot_count != baseline.slot_count)
    throw ComparisonError("reports cover different slot ranges (" +
                          std::to_string(vsf.slot_count) + " vs " +
                          std::to_string(baseline.slot_count) + ")");
  // Also validates per-node slot ranges.
  const EnergySummary energy = summarize(vsf.ledger, vsf.companion_pairs, &baseline.ledger);

  auto ratio = [](double a, double b) {
    if (b > 0.0) return a / b;
    return a > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  };

  Comparison out;
  const std::size_t n = vsf.node_ids.size();
  ComparisonRow total;
  total.label = "total";
  for (std::size_t i = 0; i < n; ++i) {
    ComparisonRow row;
    row.label = vsf.node_ids[i];
    row.vsf_energy_uj = vsf.ledger.nodes[i].total_uj();
    row.baseline_energy_uj = baseline.ledger.nodes[i].total_uj();
    row.energy_ratio = ratio(row.vsf_energy_uj, row.baseline_energy_uj);
    row.vsf_transmissions = vsf.ledger.nodes[i].transmissions;
    row.baseline_transmissions = baseline.ledger.nodes[i].transmissions;
    row.vsf_senses = vsf.ledger.nodes[i].senses;
    row.baseline_senses = baseline.ledger.nodes[i].senses;
    row.vsf_mean_abs_error = vsf.nodes[i].mean_abs_error;
    row.baseline_mean_abs_error = baseline.nodes[i].mean_abs_error;
    total.vsf_energy_uj += row.vsf_energy_uj;
    total.baseline_energy_uj += row.baseline_energy_uj;
    total.vsf_transmissions += row.vsf_transmissions;
    total.baseline_transmissions += row.baseline_transmissions;
    total.vsf_senses += row.vsf_senses;
    total.baseline_senses += row.baseline_senses;
    total.vsf_mean_abs_error += row.vsf_mean_abs_error / static_cast<double>(n);
    total.baseline_mean_abs_error += row.baseline_mean_abs_error / static_cast<double>(n);
    out.rows.push_back(row);
  }
  for (const auto& pair : energy.pairs) {
    const auto& a = out.rows[pair.type1];
    const auto& b = out.rows[pair.companion];
    ComparisonRow row;
    row.label = a.label + "+" + b.label;
    row.vsf_energy_uj = pair.combined_uj;
    row.baseline_energy_uj = *pair.baseline_uj;
    row.energy_ratio = ratio(row.vsf_energy_uj, row.baseline_energy_uj);
    row.vsf_transmissions = a.vsf_transmissions + b.vsf_transmissions;
    row.baseline_transmissions = a.baseline_transmissions + b.baseline_transmissions;
    row.vsf_senses = a.vsf_senses + b.vsf_senses;
    row.baseline_senses = a.baseline_senses + b.baseline_senses;
    row.vsf_mean_abs_error = 0.5 * (a.vsf_mean_abs_error + b.vsf_mean_abs_error);
    row.baseline_mean_abs_error = 0.5 * (a.baseline_mean_abs_error + b.baseline_mean_abs_error);
    out.rows.push_back(row);
  }
  total.energy_ratio = ratio(total.vsf_energy_uj, total.baseline_energy_uj);
  out.rows.push_back(total);
  return out;
}

}  // namespace vsf
