#include "vsf/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace vsf {

const char* to_string(Role role) { return role == Role::TypeI ? "type1" : "type2"; }
const char* to_string(Source source) {
  return source == Source::Measured ? "measured" : "predicted";
}
const char* to_string(RevalidationOutcome outcome) {
  return outcome == RevalidationOutcome::Continue ? "continue" : "retrain";
}

// ---------------------------------------------------------------------------

PhaseSchedule PhaseSchedule::from_config(const SimConfig& cfg) {
  return {cfg.training_len, cfg.operational_len, cfg.revalidation_len, Phase::Training, 0};
}

std::size_t PhaseSchedule::current_length() const {
  switch (phase) {
    case Phase::Training: return training_len;
    case Phase::Operational: return operational_len;
    case Phase::Revalidation: return revalidation_len;
  }
  return 0;
}

PhaseSchedule advance_phase(PhaseSchedule schedule, std::optional<RevalidationOutcome> outcome) {
  if (!schedule.at_boundary())
    throw StateError(std::string("cannot leave the ") + to_string(schedule.phase) +
                     " phase at slot " + std::to_string(schedule.phase_slot) + " of " +
                     std::to_string(schedule.current_length()));
  switch (schedule.phase) {
    case Phase::Training:
    case Phase::Operational:
      if (outcome) throw StateError("a revalidation outcome is only valid after revalidation");
      schedule.phase =
          schedule.phase == Phase::Training ? Phase::Operational : Phase::Revalidation;
      break;
    case Phase::Revalidation:
      if (!outcome) throw StateError("revalidation ended without an outcome");
      schedule.phase =
          *outcome == RevalidationOutcome::Continue ? Phase::Operational : Phase::Training;
      break;
  }
  schedule.phase_slot = 0;
  return schedule;
}

// ---------------------------------------------------------------------------

RoleAssignment RoleAssignment::all_type2(std::size_t nodes) {
  RoleAssignment a;
  a.roles.assign(nodes, Role::TypeII);
  a.companions.assign(nodes, {});
  return a;
}

std::size_t RoleAssignment::type1_count() const {
  return static_cast<std::size_t>(std::count(roles.begin(), roles.end(), Role::TypeI));
}

void RoleAssignment::check() const {
  if (companions.size() != roles.size())
    throw StateError("role assignment has mismatched role and companion tables");
  for (std::size_t i = 0; i < roles.size(); ++i) {
    if (roles[i] == Role::TypeII) {
      if (!companions[i].empty())
        throw StateError("TypeII node " + std::to_string(i) + " lists companions");
      continue;
    }
    if (companions[i].empty())
      throw StateError("TypeI node " + std::to_string(i) + " has no companion");
    for (NodeIndex c : companions[i]) {
      if (c >= roles.size() || c == i || roles[c] != Role::TypeII)
        throw StateError("companion " + std::to_string(c) + " of node " + std::to_string(i) +
                         " is not an active TypeII node");
    }
  }
}

namespace {

enum class Slot { Unassigned, TypeI, TypeII };

struct Candidate {
  NodeIndex dependent;
  NodeIndex companion;
  double score;
};

std::uint64_t active_of(std::span<const std::uint64_t> active, NodeIndex i) {
  return i < active.size() ? active[i] : 0;
}

// Picks the winner among admissible candidates per greedy_assign's ordering.
Candidate pick(const std::vector<Candidate>& candidates, std::span<const std::uint64_t> active,
               double band) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& c : candidates) best = std::max(best, c.score);
  const double floor = best - std::max(band, kScoreTie);

  std::uint64_t most_active = 0;
  for (const auto& c : candidates)
    if (c.score >= floor) most_active = std::max(most_active, active_of(active, c.dependent));

  double best_in_group = -std::numeric_limits<double>::infinity();
  for (const auto& c : candidates)
    if (c.score >= floor && active_of(active, c.dependent) == most_active)
      best_in_group = std::max(best_in_group, c.score);

  const Candidate* winner = nullptr;
  for (const auto& c : candidates) {
    if (c.score < floor || active_of(active, c.dependent) != most_active) continue;
    if (c.score < best_in_group - kScoreTie) continue;
    if (!winner || c.companion < winner->companion ||
        (c.companion == winner->companion && c.dependent < winner->dependent))
      winner = &c;
  }
  return *winner;
}

}  // namespace

RoleAssignment greedy_assign(const ScoreMatrix& scores, double delta_min,
                             std::size_t max_companions,
                             std::span<const std::uint64_t> active_slots, double band) {
  const std::size_t n = scores.n;
  std::vector<Slot> slot(n, Slot::Unassigned);
  RoleAssignment out = RoleAssignment::all_type2(n);

  auto admissible = [&](NodeIndex i, NodeIndex j) {
    const double s = scores.at(i, j);
    return i != j && !std::isnan(s) && s >= delta_min;
  };

  std::vector<Candidate> candidates;
  for (;;) {
    candidates.clear();
    for (NodeIndex i = 0; i < n; ++i) {
      if (slot[i] != Slot::Unassigned) continue;
      for (NodeIndex j = 0; j < n; ++j)
        if (slot[j] != Slot::TypeI && admissible(i, j))
          candidates.push_back({i, j, scores.at(i, j)});
    }
    if (candidates.empty()) break;
    const Candidate c = pick(candidates, active_slots, band);
    slot[c.dependent] = Slot::TypeI;
    slot[c.companion] = Slot::TypeII;
    out.roles[c.dependent] = Role::TypeI;
    out.companions[c.dependent] = {c.companion};
  }

  for (NodeIndex i = 0; i < n; ++i) {
    if (out.roles[i] != Role::TypeI) continue;
    std::vector<Candidate> extra;
    for (NodeIndex j = 0; j < n; ++j)
      if (out.roles[j] == Role::TypeII && j != out.companions[i].front() && admissible(i, j))
        extra.push_back({i, j, scores.at(i, j)});
    std::stable_sort(extra.begin(), extra.end(), [](const Candidate& a, const Candidate& b) {
      return a.score > b.score + kScoreTie;
    });
    for (const auto& c : extra) {
      if (out.companions[i].size() >= max_companions) break;
      out.companions[i].push_back(c.companion);
    }
  }
  return out;
}

RoleAssignment select_companions(const WindowView& training, std::size_t order,
                                 double delta_min, std::size_t max_companions) {
  if (training.size() < 2)
    throw ArityError("companion selection needs at least two nodes");
  if (!training.empty() && training.front().size() <= order)
    throw SizeError("training window must be longer than the filter order");
  return greedy_assign(pairwise_scores(training, order), delta_min, max_companions);
}

RoleAssignment select_companions(const std::vector<SensorTrace>& training, std::size_t order,
                                 double delta_min, std::size_t max_companions) {
  WindowView view;
  for (const auto& t : training) {
    if (t.has_gaps()) throw GapError("training trace '" + t.node_id + "' contains gaps");
    view.emplace_back(t.values);
  }
  return select_companions(view, order, delta_min, max_companions);
}

RoleAssignment rotate_roles(const RoleAssignment& previous, const ScoreMatrix& fresh_scores,
                            std::span<const std::uint64_t> active_slots, double delta_min,
                            std::size_t max_companions, double band) {
  RoleAssignment next =
      greedy_assign(fresh_scores, delta_min, max_companions, active_slots, band);
  next.rotation_counter = previous.rotation_counter + 1;
  return next;
}

// ---------------------------------------------------------------------------

void VirtualSensor::record(double value, Source source) {
  reconstructed.push_back(value);
  sources.push_back(source);
}

double hybrid_combine(double gamma, double delta, double temporal, double spatial) {
  const double weight = gamma + delta;
  if (weight < 1e-12) return temporal;
  return (gamma * temporal + delta * spatial) / weight;
}

double hybrid_predict(VirtualSensor& vs, std::span<const double> companion_values) {
  if (!vs.temporal || !vs.spatial)
    throw StateError("hybrid prediction needs fitted temporal and spatial models");
  if (companion_values.size() != vs.spatial->companion_count())
    throw SizeError("hybrid prediction expects " +
                    std::to_string(vs.spatial->companion_count()) + " companion values");
  const double temporal = predict_temporal(*vs.temporal, vs.history);
  const double spatial = predict_spatial(*vs.spatial, companion_values);
  const double out = hybrid_combine(vs.gamma(), vs.delta(), temporal, spatial);
  push_history(vs.history, out, vs.order);
  return out;
}

Reconstruction step_type2(VirtualSensor& vs, std::optional<double> message) {
  if (message) {
    if (vs.temporal && vs.history.size() == vs.order) {
      const double predicted = predict_temporal(*vs.temporal, vs.history);
      vs.temporal = lms_update(*vs.temporal, vs.history, *message, predicted);
    }
    push_history(vs.history, *message, vs.order);
    vs.record(*message, Source::Measured);
    return {*message, Source::Measured};
  }
  if (!vs.temporal || vs.history.size() != vs.order)
    throw ProtocolError("node " + std::to_string(vs.node) +
                        " sent nothing but the sink has no model to predict it");
  const double predicted = predict_temporal(*vs.temporal, vs.history);
  push_history(vs.history, predicted, vs.order);
  vs.record(predicted, Source::Predicted);
  return {predicted, Source::Predicted};
}

double step_type1(VirtualSensor& vs, std::span<const std::optional<double>> companion_values) {
  if (companion_values.size() != vs.companions.size())
    throw SizeError("TypeI step expects one value per companion");
  std::vector<double> values;
  values.reserve(companion_values.size());
  for (std::size_t j = 0; j < companion_values.size(); ++j) {
    if (!companion_values[j])
      throw ProtocolError("companion " + std::to_string(vs.companions[j]) + " of node " +
                          std::to_string(vs.node) + " has no value this slot");
    values.push_back(*companion_values[j]);
  }
  const double out = hybrid_predict(vs, values);
  vs.record(out, Source::Predicted);
  return out;
}

// ---------------------------------------------------------------------------

void revalidation_step(std::vector<VirtualSensor>& sensors, std::span<const double> actuals,
                       RevalidationTally& tally) {
  if (actuals.size() != sensors.size())
    throw SizeError("revalidation slot needs one reading per sensor");
  if (tally.abs_error_sum.size() != sensors.size())
    tally.abs_error_sum.assign(sensors.size(), 0.0);

  for (std::size_t i = 0; i < sensors.size(); ++i) {
    auto& vs = sensors[i];
    const double actual = actuals[vs.node];
    if (vs.temporal && vs.history.size() == vs.order) {
      const double temporal = predict_temporal(*vs.temporal, vs.history);
      const double e_tem = actual - temporal;
      double served = temporal;
      if (vs.role == Role::TypeI && vs.spatial) {
        std::vector<double> inputs;
        for (NodeIndex c : vs.companions) inputs.push_back(actuals[c]);
        const double spatial = predict_spatial(*vs.spatial, inputs);
        served = hybrid_combine(vs.gamma(), vs.delta(), temporal, spatial);
        vs.delta_tracker = update_fit(vs.delta_tracker, actual - spatial);
      }
      vs.gamma_tracker = update_fit(vs.gamma_tracker, e_tem);
      tally.abs_error_sum[i] += std::abs(actual - served);
    }
    step_type2(vs, actual);
  }
  ++tally.slots;
}

RevalidationDecision refresh_and_decide(std::vector<VirtualSensor>& sensors,
                                        const WindowView& reference, std::size_t skip,
                                        const RevalidationTally& tally, const SimConfig& cfg) {
  RevalidationDecision decision;
  decision.mean_abs_error.assign(sensors.size(), 0.0);
  decision.refit_delta.assign(sensors.size(), std::numeric_limits<double>::quiet_NaN());
  std::ostringstream why;

  for (std::size_t i = 0; i < sensors.size(); ++i) {
    auto& vs = sensors[i];
    if (tally.slots > 0 && i < tally.abs_error_sum.size())
      decision.mean_abs_error[i] = tally.abs_error_sum[i] / static_cast<double>(tally.slots);
    if (decision.mean_abs_error[i] > cfg.retrain_error_limit) {
      decision.outcome = RevalidationOutcome::Retrain;
      why << "node " << vs.node << " mean error " << decision.mean_abs_error[i]
          << " exceeds limit; ";
    }
    if (vs.role != Role::TypeI) continue;

    std::vector<std::span<const double>> comps;
    for (NodeIndex c : vs.companions) comps.push_back(reference.at(c));
    const SpatialFit refit = fit_spatial_window(reference.at(vs.node), comps, skip);
    decision.refit_delta[i] = refit.tracker.score();
    // A rank-deficient refit only pins the regressor on the window's span;
    // keep a well-posed previous one instead.
    if (!refit.regressor.degenerate || !vs.spatial || vs.spatial->degenerate)
      vs.spatial = refit.regressor;

    const double tracked = vs.delta_tracker.score();
    if (tracked < cfg.delta_min || decision.refit_delta[i] < cfg.delta_min) {
      decision.outcome = RevalidationOutcome::Retrain;
      why << "node " << vs.node << " spatial fit " << std::min(tracked, decision.refit_delta[i])
          << " below delta_min; ";
    }
  }
  decision.reason = why.str();
  return decision;
}

RevalidationDecision revalidate(std::vector<VirtualSensor>& sensors,
                                const std::vector<std::vector<double>>& data,
                                const SimConfig& cfg) {
  if (data.size() != sensors.size())
    throw SizeError("revalidation data needs one row per sensor");
  for (const auto& row : data)
    if (row.size() < cfg.revalidation_len || row.size() != data.front().size())
      throw SizeError("revalidation data shorter than R_p = " +
                      std::to_string(cfg.revalidation_len) + " slots");

  RevalidationTally tally;
  std::vector<double> slot(sensors.size());
  for (std::size_t t = 0; t < data.front().size(); ++t) {
    for (std::size_t i = 0; i < sensors.size(); ++i) slot[i] = data[i][t];
    revalidation_step(sensors, slot, tally);
  }
  WindowView reference;
  for (const auto& row : data) reference.emplace_back(row);
  return refresh_and_decide(sensors, reference, 0, tally, cfg);
}

}  // namespace vsf
