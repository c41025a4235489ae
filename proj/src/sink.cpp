#include "vsf/sink.hpp"

#include <limits>

namespace vsf {
namespace {
constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();
}

const char* to_string(SinkMode mode) {
  switch (mode) {
    case SinkMode::Vsf: return "vsf";
    case SinkMode::BaselineLms: return "baseline_lms";
    case SinkMode::NoVsf: return "no_vsf";
  }
  return "?";
}

Sink::Sink(SimConfig cfg, std::size_t node_count, SinkMode mode,
           std::optional<RoleAssignment> pinned_roles)
    : cfg_(std::move(cfg)),
      mode_(mode),
      pinned_(std::move(pinned_roles)),
      schedule_(PhaseSchedule::from_config(cfg_)),
      assignment_(RoleAssignment::all_type2(node_count)),
      active_slots_(node_count, 0) {
  require_valid(cfg_);
  if (pinned_) {
    if (pinned_->node_count() != node_count)
      throw ConfigError("pinned role assignment covers a different number of nodes");
    pinned_->check();
  }
  if (mode_ == SinkMode::NoVsf) schedule_.training_len = kUnbounded;
  if (mode_ == SinkMode::BaselineLms) schedule_.operational_len = kUnbounded;
  sensors_.resize(node_count);
  for (std::size_t i = 0; i < node_count; ++i) {
    sensors_[i].node = i;
    sensors_[i].order = cfg_.filter_order;
  }
}

CommandBatch Sink::initial_commands() const {
  CommandBatch commands(sensors_.size());
  for (auto& c : commands) c.push_back(ReportAll{schedule_.training_len});
  return commands;
}

bool Sink::phase_bounded() const { return schedule_.current_length() != kUnbounded; }

bool Sink::expects_active(NodeIndex node) const {
  return !(schedule_.phase == Phase::Operational && assignment_.roles.at(node) == Role::TypeI);
}

void Sink::remember_row(std::span<const std::optional<double>> messages) {
  std::vector<double> row;
  row.reserve(messages.size());
  for (const auto& m : messages) row.push_back(*m);
  reference_.push_back(std::move(row));
  while (reference_.size() > cfg_.training_len) reference_.pop_front();
}

WindowView Sink::reference_view(std::vector<std::vector<double>>& columns) const {
  columns.assign(sensors_.size(), {});
  for (auto& c : columns) c.reserve(reference_.size());
  for (const auto& row : reference_)
    for (std::size_t i = 0; i < row.size(); ++i) columns[i].push_back(row[i]);
  WindowView view;
  for (const auto& c : columns) view.emplace_back(c);
  return view;
}

Sink::SlotResult Sink::process_slot(std::span<const std::optional<double>> messages) {
  const std::size_t n = sensors_.size();
  if (messages.size() != n) throw SizeError("one message slot per node expected");
  SlotResult out{std::vector<double>(n, 0.0), std::vector<Source>(n, Source::Measured)};

  if (schedule_.phase == Phase::Operational) {
    for (std::size_t i = 0; i < n; ++i) {
      if (assignment_.roles[i] != Role::TypeII) continue;
      const auto r = step_type2(sensors_[i], messages[i]);
      out.values[i] = r.value;
      out.sources[i] = r.source;
      ++active_slots_[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (assignment_.roles[i] != Role::TypeI) continue;
      if (messages[i])
        throw ProtocolError("dormant node " + std::to_string(i) + " transmitted");
      std::vector<std::optional<double>> companion_values;
      for (NodeIndex c : sensors_[i].companions) companion_values.emplace_back(out.values[c]);
      out.values[i] = step_type1(sensors_[i], companion_values);
      out.sources[i] = Source::Predicted;
    }
    return out;
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (!messages[i])
      throw ProtocolError("node " + std::to_string(i) + " stayed silent during " +
                          to_string(schedule_.phase));
    out.values[i] = *messages[i];
    ++active_slots_[i];
  }
  if (schedule_.phase == Phase::Revalidation) {
    revalidation_step(sensors_, out.values, tally_);
  } else {
    for (std::size_t i = 0; i < n; ++i) step_type2(sensors_[i], messages[i]);
  }
  if (mode_ != SinkMode::NoVsf) remember_row(messages);
  return out;
}

CommandBatch Sink::end_slot() {
  ++schedule_.phase_slot;
  CommandBatch commands(sensors_.size());
  if (!phase_bounded() || !schedule_.at_boundary()) return commands;
  switch (schedule_.phase) {
    case Phase::Training: finish_training(commands); break;
    case Phase::Operational: finish_operational(commands); break;
    case Phase::Revalidation: finish_revalidation(commands); break;
  }
  ++phase_serial_;
  return commands;
}

FilterState Sink::filter_state(NodeIndex node) const {
  return {*sensors_[node].temporal, sensors_[node].history};
}

void Sink::operational_commands(CommandBatch& commands) const {
  for (std::size_t i = 0; i < sensors_.size(); ++i) {
    if (assignment_.roles[i] == Role::TypeI)
      commands[i].push_back(SleepFor{cfg_.operational_len});
    else
      commands[i].push_back(ActivateWith{filter_state(i), cfg_.error_threshold});
  }
}

void Sink::install_assignment(RoleAssignment next, const WindowView& reference,
                              bool keep_trackers) {
  next.check();
  for (std::size_t i = 0; i < sensors_.size(); ++i) {
    auto& vs = sensors_[i];
    const bool unchanged = keep_trackers && vs.role == Role::TypeI &&
                           next.roles[i] == Role::TypeI && vs.companions == next.companions[i] &&
                           vs.spatial.has_value();
    vs.role = next.roles[i];
    vs.companions = next.companions[i];
    if (vs.role == Role::TypeII) {
      vs.spatial.reset();
      vs.delta_tracker = {};
    } else if (!unchanged) {
      std::vector<std::span<const double>> comps;
      for (NodeIndex c : vs.companions) comps.push_back(reference.at(c));
      auto fit = fit_spatial_window(reference.at(i), comps, cfg_.filter_order);
      vs.spatial = std::move(fit.regressor);
      vs.delta_tracker = fit.tracker;
    }
  }
  assignment_ = std::move(next);
  history_.push_back(assignment_);
}

void Sink::finish_training(CommandBatch& commands) {
  std::vector<std::vector<double>> columns;
  const WindowView view = reference_view(columns);
  for (std::size_t i = 0; i < sensors_.size(); ++i) {
    auto& vs = sensors_[i];
    vs.temporal =
        fit_temporal(view[i], cfg_.filter_order, cfg_.learning_rate, cfg_.normalize_lms);
    vs.gamma_tracker = temporal_tracker(*vs.temporal, view[i]);
    vs.delta_tracker = {};
    vs.spatial.reset();
    vs.role = Role::TypeII;
    vs.companions.clear();
  }

  RoleAssignment next = RoleAssignment::all_type2(sensors_.size());
  if (mode_ == SinkMode::Vsf) {
    if (pinned_) {
      next = *pinned_;
    } else if (sensors_.size() >= 2) {
      if (!trained_once_) {
        next = select_companions(view, cfg_.filter_order, cfg_.delta_min, cfg_.max_companions);
      } else {
        next = greedy_assign(pairwise_scores(view, cfg_.filter_order), cfg_.delta_min,
                             cfg_.max_companions, active_slots_, cfg_.rotation_band);
      }
    }
    next.rotation_counter = assignment_.rotation_counter + (trained_once_ ? 1 : 0);
  }
  install_assignment(std::move(next), view, false);
  trained_once_ = true;
  schedule_ = advance_phase(schedule_);
  operational_commands(commands);
}

void Sink::finish_operational(CommandBatch& commands) {
  schedule_ = advance_phase(schedule_);
  tally_ = {};
  for (std::size_t i = 0; i < sensors_.size(); ++i) {
    if (assignment_.roles[i] == Role::TypeI)
      commands[i].push_back(ActivateWith{filter_state(i), cfg_.error_threshold});
    commands[i].push_back(ReportAll{cfg_.revalidation_len});
  }
}

void Sink::finish_revalidation(CommandBatch& commands) {
  std::vector<std::vector<double>> columns;
  const WindowView view = reference_view(columns);
  auto decision = refresh_and_decide(sensors_, view, cfg_.filter_order, tally_, cfg_);
  const auto outcome = decision.outcome;
  decisions_.push_back(std::move(decision));

  if (outcome == RevalidationOutcome::Retrain) {
    ++retrains_;
    schedule_ = advance_phase(schedule_, outcome);
    for (auto& vs : sensors_) {
      vs.gamma_tracker = {};
      vs.delta_tracker = {};
    }
    for (auto& c : commands) c.push_back(ReportAll{cfg_.training_len});
    return;
  }

  RoleAssignment next;
  if (pinned_) {
    next = *pinned_;
    next.rotation_counter = assignment_.rotation_counter + 1;
  } else {
    next = rotate_roles(assignment_, pairwise_scores(view, cfg_.filter_order), active_slots_,
                        cfg_.delta_min, cfg_.max_companions, cfg_.rotation_band);
  }
  install_assignment(std::move(next), view, true);
  schedule_ = advance_phase(schedule_, outcome);
  operational_commands(commands);
}

}  // namespace vsf
