#pragma once
// The per-agent decision cycle.
//
// The agent walks its activity tree from the root (or from the innermost
// unfinished Sequential activity) down to an Atomic activity. At every
// composite node it compares the candidates' habitual pressure with the
// scenario's habit threshold:
//
//   max pressure >= threshold, or not enough attention to deliberate
//       -> habitual choice, argmax pressure
//   otherwise
//       -> intentional choice, argmax value score; costs deliberationCost
//
// Ties go to the smallest activity id unless the scenario asks for seeded
// random tie-breaking.

#include <string_view>
#include <vector>

#include "sopra/model.hpp"
#include "sopra/state.hpp"

namespace sopra {

enum class DecisionMode { Habitual, Intentional };
std::string_view to_string(DecisionMode m);

// Stored strength of (activity, e), or attenuation^k times the strength on
// the nearest k-th context ancestor of e that has one, or 0.
double effective_strength(const AgentState& agent, ElemIdx activity, ElemIdx e, const Scenario& s);

// Aggregate of effective strengths over the snapshot (mean by default).
// Throws std::invalid_argument on an empty snapshot.
double habitual_pressure(const AgentState& agent, ElemIdx activity, const ContextSnapshot& ctx, const Scenario& s);

// Sum over values of priority.personalView * connection.personalView.
double intentional_score(const AgentState& agent, ElemIdx activity, const Scenario& s);

// Abstract: IsA children. Sequential: PartOf children not yet completed in the
// innermost pending frame for `node`. Throws std::logic_error for Atomic nodes
// and composites without candidates.
std::vector<ElemIdx> candidate_set(ElemIdx node, const ExecutionState& exec, const Scenario& s);

struct DecisionStep {
  ElemIdx node;
  ElemIdx chosen;
  DecisionMode mode = DecisionMode::Intentional;
  double pressure = 0.0;    // max candidate pressure, the value compared to the threshold
  double score = 0.0;       // intentional score of the chosen candidate
  double scoreTotal = 0.0;  // sum of intentional scores over the candidates
  std::vector<ElemIdx> candidates;
  bool feasibilityFallback = false;
};

struct DecisionTrace {
  std::vector<DecisionStep> steps;
};

// One decision at a composite node. Deducts deliberationCost from the agent's
// attentional resources on an intentional choice.
DecisionStep decide_step(AgentState& agent, ElemIdx node, const ContextSnapshot& ctx, const Scenario& s, Rng& rng);

struct CycleResult {
  ElemIdx atomic;
  DecisionTrace trace;
};

// Descends to an Atomic activity and books its completion in agent.exec.
CycleResult decision_cycle(AgentState& agent, const ContextSnapshot& ctx, const Scenario& s, Rng& rng);

}  // namespace sopra
