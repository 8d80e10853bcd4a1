#pragma once
// State updates: habit reinforcement and decay, lagged self-awareness of
// habits, and collective views learned from watching co-located agents.
//
// Every update is a convex combination of values in [0,1], so all view
// components stay in [0,1] for parameters inside their declared ranges.

#include <cstdint>
#include <map>
#include <vector>

#include "sopra/model.hpp"
#include "sopra/state.hpp"

namespace sopra {

// Strengths of the connections reinforced this tick, before reinforcement.
using ReinforcedSet = std::map<HabitKey, double>;

// strength <- strength + habitRate * (1 - strength) for (activity, e), every e
// in the snapshot. Connections are created on demand. A pair reinforced twice
// in one tick keeps its first pre-update strength in `reinforced`.
void reinforce_habit(AgentState& agent, ElemIdx activity, const ContextSnapshot& ctx, ReinforcedSet& reinforced);

// Default mode: strength <- (1 - decayRate) * strength on every connection not
// reinforced this tick. decayAll mode: every connection decays from its
// pre-reinforcement strength, so a reinforced pair ends at
// (1 - d) h + r (1 - h).
void decay_habits(AgentState& agent, const ReinforcedSet& reinforced, const Globals& g);

// Long-run strength of a pair that is reinforced every tick.
// Throws std::invalid_argument outside r in (0,1], d in [0,1).
double equilibrium_strength(double habitRate, double decayRate, DecayMode mode);

// personalView <- personalView + awarenessRate * (strength - personalView).
void update_personal_view(AgentState& agent, const Globals& g);

struct ObservationEvent {
  std::size_t observer = 0;
  std::size_t actor = 0;
  ElemIdx location{};                 // where the actor acted
  std::vector<ElemIdx> performed;     // activities chosen along the actor's descent
  std::vector<ElemIdx> alternatives;  // candidates the actor passed over
  ContextSnapshot context;            // the actor's snapshot
  std::int64_t tick = 0;
};

// For each e in the actor's context: performed activities move the
// observer's myCollectiveView toward 1, passed-over alternatives toward 0
// (existing connections only). Throws std::invalid_argument when observer and
// actor coincide or are not co-located.
void observe(AgentState& observer, const ObservationEvent& ev, const Globals& g);

}  // namespace sopra
