#include "sopra/learning.hpp"

#include <algorithm>
#include <stdexcept>

namespace sopra {

void reinforce_habit(AgentState& agent, ElemIdx activity, const ContextSnapshot& ctx, ReinforcedSet& reinforced) {
  const double r = agent.habitRate;
  for (const auto e : ctx.present) {
    ViewTriple& c = agent.habits[{activity, e}];
    reinforced.emplace(HabitKey{activity, e}, c.strength);
    c.strength += r * (1.0 - c.strength);
  }
}

void decay_habits(AgentState& agent, const ReinforcedSet& reinforced, const Globals& g) {
  const double d = g.decayRate;
  if (d == 0.0) return;
  for (auto& [key, c] : agent.habits) {
    auto it = reinforced.find(key);
    if (it == reinforced.end()) {
      c.strength *= 1.0 - d;
    } else if (g.decayMode == DecayMode::DecayAll) {
      c.strength = std::clamp(c.strength - d * it->second, 0.0, 1.0);
    }
  }
}

double equilibrium_strength(double habitRate, double decayRate, DecayMode mode) {
  if (!(habitRate > 0.0 && habitRate <= 1.0)) throw std::invalid_argument("habitRate must be in (0,1]");
  if (!(decayRate >= 0.0 && decayRate < 1.0)) throw std::invalid_argument("decayRate must be in [0,1)");
  if (mode == DecayMode::Default) return 1.0;
  return habitRate / (habitRate + decayRate);
}

void update_personal_view(AgentState& agent, const Globals& g) {
  const double a = g.awarenessRate;
  for (auto& [key, c] : agent.habits) c.personalView += a * (c.strength - c.personalView);
}

void observe(AgentState& observer, const ObservationEvent& ev, const Globals& g) {
  if (ev.observer == ev.actor) throw std::invalid_argument("observe: an agent does not observe itself");
  if (observer.slot != ev.observer) throw std::invalid_argument("observe: event addressed to another observer");
  if (observer.location != ev.location) throw std::invalid_argument("observe: observer and actor are not co-located");

  const double rate = g.socialLearningRate;
  for (const auto e : ev.context.present) {
    for (const auto a : ev.performed) {
      ViewTriple& c = observer.habits[{a, e}];
      const double v = c.collective();
      c.myCollectiveView = v + rate * (1.0 - v);
    }
    for (const auto a : ev.alternatives) {
      auto it = observer.habits.find({a, e});
      if (it == observer.habits.end()) continue;
      it->second.myCollectiveView = (1.0 - rate) * it->second.collective();
    }
  }
}

}  // namespace sopra
