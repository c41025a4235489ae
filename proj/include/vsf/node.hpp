#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "vsf/core.hpp"
#include "vsf/predictors.hpp"

namespace vsf {

/// Filter coefficients plus the delay-line contents they operate on. This is
/// what a sink ships to a node so both sides predict from identical state.
struct FilterState {
  TemporalFilter filter;
  std::vector<double> history;  // most recent first

  friend bool operator==(const FilterState&, const FilterState&) = default;
};

// Sink -> node commands.
struct SleepFor {
  std::size_t slots = 0;
  friend bool operator==(const SleepFor&, const SleepFor&) = default;
};
struct ActivateWith {
  FilterState state;
  double epsilon = 0.0;
  friend bool operator==(const ActivateWith&, const ActivateWith&) = default;
};
struct ReportAll {
  std::size_t slots = 0;
  friend bool operator==(const ReportAll&, const ReportAll&) = default;
};
using Command = std::variant<SleepFor, ActivateWith, ReportAll>;

enum class NodeState { Dormant, Active };
enum class ActiveMode { Suppress, ReportAll };
enum class ActionKind { Slept, SensedOnly, Transmitted };

const char* to_string(NodeState state);
const char* to_string(ActionKind kind);

struct NodeAction {
  ActionKind kind = ActionKind::Slept;
  double value = 0.0;  // sensed reading; meaningless for Slept
};

struct NodeCounters {
  std::uint64_t senses = 0;
  std::uint64_t transmissions = 0;
  std::uint64_t suppressions = 0;
  std::uint64_t switches = 0;
  std::uint64_t dormant_slots = 0;

  friend bool operator==(const NodeCounters&, const NodeCounters&) = default;
};

/// Physical sensor: follows sink commands, senses while active and, in
/// suppression mode, transmits only readings its mirror predictor misses by
/// more than epsilon. A zero epsilon suppresses nothing.
class PhysicalNode {
 public:
  PhysicalNode(NodeIndex id, std::size_t order);

  void apply(const Command& command);
  /// Dormant nodes ignore `actual`. Throws ProtocolError when a dormant node
  /// has run out of commanded sleep.
  NodeAction step(double actual);

  NodeIndex id() const { return id_; }
  NodeState state() const { return state_; }
  ActiveMode mode() const { return mode_; }
  bool suppressing() const { return state_ == NodeState::Active && mode_ == ActiveMode::Suppress; }
  const std::optional<TemporalFilter>& mirror() const { return mirror_; }
  const std::vector<double>& history() const { return history_; }
  double epsilon() const { return epsilon_; }
  std::size_t sleep_remaining() const { return sleep_remaining_; }
  std::size_t report_remaining() const { return report_remaining_; }
  const NodeCounters& counters() const { return counters_; }

 private:
  void set_state(NodeState next);
  void push_history(double value);
  NodeAction transmit(double actual);

  NodeIndex id_;
  std::size_t order_;
  NodeState state_ = NodeState::Active;
  ActiveMode mode_ = ActiveMode::ReportAll;
  std::optional<TemporalFilter> mirror_;
  std::vector<double> history_;
  double epsilon_ = 0.0;
  std::size_t sleep_remaining_ = 0;
  std::size_t report_remaining_ = 0;
  NodeCounters counters_;
};

}  // namespace vsf
