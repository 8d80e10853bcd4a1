#pragma once
// Mutable per-agent state. Connection stores are sparse: an absent key reads
// as an all-zero ViewTriple.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "sopra/model.hpp"

namespace sopra {

using Rng = std::mt19937_64;

// (activity, context element)
using HabitKey = std::pair<ElemIdx, ElemIdx>;
// (activity, value)
using ValueKey = std::pair<ElemIdx, ValueIdx>;

struct ContextSnapshot {
  std::vector<ElemIdx> present;  // sorted, unique

  static ContextSnapshot of(std::vector<ElemIdx> elements);
  bool contains(ElemIdx e) const;
  bool operator==(const ContextSnapshot&) const = default;
};

// One Sequential activity in progress. `current` is the PartOf child whose
// descent is underway.
struct PendingSequential {
  ElemIdx activity;
  std::vector<ElemIdx> completed;  // sorted
  std::optional<ElemIdx> current;
  bool operator==(const PendingSequential&) const = default;
};

struct ExecutionState {
  std::vector<PendingSequential> pending;  // innermost last
  bool operator==(const ExecutionState&) const = default;
};

struct AgentState {
  std::size_t slot = 0;
  ElemIdx self{};
  ElemIdx root{};
  ElemIdx location{};
  double habitRate = 0.1;
  std::int64_t attentionalResources = 0;
  std::int64_t attentionBudget = 0;
  std::optional<ElemIdx> lastActivity;

  std::map<HabitKey, ViewTriple> habits;
  std::map<ValueIdx, ViewTriple> priorities;
  std::map<ValueKey, ViewTriple> valueConnections;
  ExecutionState exec;

  const ViewTriple* habit(ElemIdx activity, ElemIdx element) const;
  const ViewTriple* priority(ValueIdx v) const;
  const ViewTriple* value_connection(ElemIdx activity, ValueIdx v) const;
};

// Tick-zero state of the agent in `slot`, loaded from the scenario.
AgentState initial_agent_state(const Scenario& s, std::size_t slot);

}  // namespace sopra
