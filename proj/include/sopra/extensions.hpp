#pragma once
// Affordances (context side) and competences (agent side) as feasibility
// gates on decision candidates. Only consulted when the scenario sets
// extensionsEnabled.

#include <vector>

#include "sopra/model.hpp"
#include "sopra/state.hpp"

namespace sopra {

// Max affordance strength of `activity` over the snapshot; 1 when the
// activity has no affordance declarations at all.
double afforded(ElemIdx activity, const ContextSnapshot& ctx, const Scenario& s);

// Min over the activity's requirements of min(1, level / required); 1 when
// nothing is required. A requirement of 0 counts as no requirement.
double competent(const AgentState& agent, ElemIdx activity, const Scenario& s);

inline double feasibility(const AgentState& agent, ElemIdx activity, const ContextSnapshot& ctx,
                          const Scenario& s) {
  return afforded(activity, ctx, s) * competent(agent, activity, s);
}

struct FilterResult {
  std::vector<ElemIdx> candidates;
  bool fallback = false;  // everything was infeasible; original set kept
};

// Drops candidates whose feasibility is below feasibilityThreshold. Never
// returns an empty set.
FilterResult filter_candidates(const std::vector<ElemIdx>& candidates, const AgentState& agent,
                               const ContextSnapshot& ctx, const Scenario& s);

}  // namespace sopra
