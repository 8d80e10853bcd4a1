#pragma once
// Inference over the activity graph.

#include <optional>
#include <vector>

#include "sopra/model.hpp"
#include "sopra/state.hpp"

namespace sopra {

// Direct children of `a` under relation r, ascending.
std::vector<ElemIdx> children(ElemIdx a, RelationType r, const Scenario& s);

// Transitive children of `a` (excluding `a`) following only r, or both
// relations when r is empty. Ascending.
std::vector<ElemIdx> descendants(ElemIdx a, std::optional<RelationType> r, const Scenario& s);

// Atomic activities reachable from `a` over both relations; {a} if a is Atomic.
std::vector<ElemIdx> atomic_leaves(ElemIdx a, const Scenario& s);

// Value-connection strength of `a` for `v`. Atomic: the stored strength (0
// when absent). Composite: minimum over the children that implement it (IsA
// for Abstract, PartOf for Sequential), so a composite is only as strongly
// connected as its weakest implementation.
double propagate_value_connection(const AgentState& agent, ValueIdx v, ElemIdx a, const Scenario& s);

// For every connection of the agent whose myCollectiveView is unset, assume
// others see it the way the agent does: myCollectiveView := personalView.
void project_collective_from_personal(AgentState& agent);

// An agent's belief about how `child` relates to `parent`. Labels default to
// the ground-truth connection (empty when the two are not connected) unless
// the scenario overrides them for this agent.
struct ActivityBelief {
  ElemIdx child;
  ElemIdx parent;
  std::optional<RelationType> personalView;
  std::optional<RelationType> myCollectiveView;
};

ActivityBelief activity_belief(std::size_t agentSlot, ElemIdx child, ElemIdx parent, const Scenario& s);

}  // namespace sopra
