#include "vsf/node.hpp"

#include <cmath>
#include <string>

namespace vsf {

const char* to_string(NodeState state) {
  return state == NodeState::Dormant ? "dormant" : "active";
}

const char* to_string(ActionKind kind) {
  switch (kind) {
    case ActionKind::Slept: return "slept";
    case ActionKind::SensedOnly: return "sensed_only";
    case ActionKind::Transmitted: return "transmitted";
  }
  return "?";
}

PhysicalNode::PhysicalNode(NodeIndex id, std::size_t order) : id_(id), order_(order) {}

void PhysicalNode::set_state(NodeState next) {
  if (next != state_) ++counters_.switches;
  state_ = next;
}

void PhysicalNode::push_history(double value) { vsf::push_history(history_, value, order_); }

void PhysicalNode::apply(const Command& command) {
  std::visit(
      [this](const auto& cmd) {
        using T = std::decay_t<decltype(cmd)>;
        if constexpr (std::is_same_v<T, SleepFor>) {
          set_state(NodeState::Dormant);
          sleep_remaining_ = cmd.slots;
          report_remaining_ = 0;
        } else if constexpr (std::is_same_v<T, ActivateWith>) {
          set_state(NodeState::Active);
          mode_ = ActiveMode::Suppress;
          mirror_ = cmd.state.filter;
          history_ = cmd.state.history;
          epsilon_ = cmd.epsilon;
          sleep_remaining_ = 0;
        } else {
          set_state(NodeState::Active);
          mode_ = ActiveMode::ReportAll;
          report_remaining_ = cmd.slots;
          sleep_remaining_ = 0;
        }
      },
      command);
}

NodeAction PhysicalNode::transmit(double actual) {
  // The sink runs the identical update on receipt.
  if (mirror_ && history_.size() == order_) {
    const double predicted = predict_temporal(*mirror_, history_);
    mirror_ = lms_update(*mirror_, history_, actual, predicted);
  }
  push_history(actual);
  ++counters_.transmissions;
  return {ActionKind::Transmitted, actual};
}

NodeAction PhysicalNode::step(double actual) {
  if (state_ == NodeState::Dormant) {
    if (sleep_remaining_ == 0)
      throw ProtocolError("node " + std::to_string(id_) +
                          " stepped while dormant with no sleep remaining");
    --sleep_remaining_;
    ++counters_.dormant_slots;
    return {ActionKind::Slept, 0.0};
  }

  ++counters_.senses;
  if (mode_ == ActiveMode::ReportAll) {
    if (report_remaining_ > 0) --report_remaining_;
    if (report_remaining_ == 0 && mirror_) {
      // Commanded reporting window is over; fall back to suppression.
      NodeAction action = transmit(actual);
      mode_ = ActiveMode::Suppress;
      return action;
    }
    return transmit(actual);
  }

  if (!mirror_ || history_.size() != order_) return transmit(actual);
  const double predicted = predict_temporal(*mirror_, history_);
  if (epsilon_ > 0.0 && std::abs(actual - predicted) <= epsilon_) {
    push_history(predicted);
    ++counters_.suppressions;
    return {ActionKind::SensedOnly, actual};
  }
  return transmit(actual);
}

}  // namespace vsf
