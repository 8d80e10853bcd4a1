#include "sopra/extensions.hpp"

#include <algorithm>

namespace sopra {

double afforded(ElemIdx activity, const ContextSnapshot& ctx, const Scenario& s) {
  const auto& decls = s.affordances_of(activity);
  if (decls.empty()) return 1.0;
  double best = 0.0;
  for (const auto& [element, strength] : decls) {
    if (ctx.contains(element)) best = std::max(best, strength);
  }
  return best;
}

double competent(const AgentState& agent, ElemIdx activity, const Scenario& s) {
  double result = 1.0;
  for (const auto& [competence, required] : s.requirements_of(activity)) {
    if (required <= 0.0) continue;
    const double level = s.competence_level(agent.slot, competence);
    result = std::min(result, std::min(1.0, level / required));
  }
  return result;
}

FilterResult filter_candidates(const std::vector<ElemIdx>& candidates, const AgentState& agent,
                               const ContextSnapshot& ctx, const Scenario& s) {
  const double threshold = s.globals().feasibilityThreshold;
  FilterResult out;
  for (const auto c : candidates) {
    if (feasibility(agent, c, ctx, s) >= threshold) out.candidates.push_back(c);
  }
  if (out.candidates.empty()) {
    out.candidates = candidates;
    out.fallback = !candidates.empty();
  }
  return out;
}

}  // namespace sopra
