#include "sopra/cognition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sopra/extensions.hpp"

namespace sopra {

std::string_view to_string(DecisionMode m) { return m == DecisionMode::Habitual ? "Habitual" : "Intentional"; }

double effective_strength(const AgentState& agent, ElemIdx activity, ElemIdx e, const Scenario& s) {
  // Absent and zero-strength connections are equivalent, so a zero entry on
  // the token itself does not shadow an ancestor.
  if (const ViewTriple* c = agent.habit(activity, e); c && c->strength > 0.0) return c->strength;
  double weight = 1.0;
  std::size_t hops = 0;
  for (auto p = s.context_parent(e); p && hops < s.element_count(); p = s.context_parent(*p), ++hops) {
    weight *= s.globals().attenuation;
    if (const ViewTriple* c = agent.habit(activity, *p); c && c->strength > 0.0) return weight * c->strength;
  }
  return 0.0;
}

double habitual_pressure(const AgentState& agent, ElemIdx activity, const ContextSnapshot& ctx, const Scenario& s) {
  if (ctx.present.empty()) throw std::invalid_argument("habitual_pressure: empty context snapshot");
  double sum = 0.0;
  double best = 0.0;
  for (const auto e : ctx.present) {
    const double h = effective_strength(agent, activity, e, s);
    sum += h;
    best = std::max(best, h);
  }
  switch (s.globals().pressureAggregation) {
    case PressureAggregation::Max: return best;
    case PressureAggregation::Sum: return std::min(1.0, sum);
    case PressureAggregation::Mean: break;
  }
  return sum / static_cast<double>(ctx.present.size());
}

double intentional_score(const AgentState& agent, ElemIdx activity, const Scenario& s) {
  double score = 0.0;
  for (const auto& [value, priority] : agent.priorities) {
    if (const ViewTriple* c = agent.value_connection(activity, value)) score += priority.personalView * c->personalView;
  }
  (void)s;
  return score;
}

std::vector<ElemIdx> candidate_set(ElemIdx node, const ExecutionState& exec, const Scenario& s) {
  const ActivityType type = s.activity_type(node);
  if (type == ActivityType::Atomic) {
    throw std::logic_error("candidate_set: '" + s.id(node) + "' is atomic");
  }
  std::vector<ElemIdx> out;
  if (type == ActivityType::Abstract) {
    out = s.children(node, RelationType::IsA);
  } else {
    const std::vector<ElemIdx>* completed = nullptr;
    if (!exec.pending.empty() && exec.pending.back().activity == node) completed = &exec.pending.back().completed;
    for (const auto c : s.children(node, RelationType::PartOf)) {
      if (!completed || !std::binary_search(completed->begin(), completed->end(), c)) out.push_back(c);
    }
  }
  if (out.empty()) throw std::logic_error("candidate_set: '" + s.id(node) + "' has no candidates");
  return out;
}

namespace {

// Index of the maximum; ties resolved by position (candidates are sorted by
// id) or uniformly with the agent's generator.
std::size_t argmax(const std::vector<double>& values, TieBreak tie, Rng& rng) {
  const double best = *std::max_element(values.begin(), values.end());
  std::vector<std::size_t> tied;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == best) tied.push_back(i);
  }
  if (tie == TieBreak::Lexicographic || tied.size() == 1) return tied.front();
  return tied[static_cast<std::size_t>(rng() % tied.size())];
}

}  // namespace

DecisionStep decide_step(AgentState& agent, ElemIdx node, const ContextSnapshot& ctx, const Scenario& s, Rng& rng) {
  const Globals& g = s.globals();
  DecisionStep step;
  step.node = node;
  step.candidates = candidate_set(node, agent.exec, s);
  if (g.extensionsEnabled) {
    auto filtered = filter_candidates(step.candidates, agent, ctx, s);
    step.candidates = std::move(filtered.candidates);
    step.feasibilityFallback = filtered.fallback;
  }

  const std::size_t n = step.candidates.size();
  std::vector<double> pressures(n);
  std::vector<double> scores(n);
  for (std::size_t i = 0; i < n; ++i) {
    pressures[i] = habitual_pressure(agent, step.candidates[i], ctx, s);
    scores[i] = intentional_score(agent, step.candidates[i], s);
    step.scoreTotal += scores[i];
  }
  step.pressure = *std::max_element(pressures.begin(), pressures.end());

  std::size_t pick = 0;
  if (step.pressure >= g.habitThreshold || agent.attentionalResources < g.deliberationCost) {
    step.mode = DecisionMode::Habitual;
    pick = argmax(pressures, g.tieBreak, rng);
  } else {
    step.mode = DecisionMode::Intentional;
    pick = argmax(scores, g.tieBreak, rng);
    agent.attentionalResources -= g.deliberationCost;
  }
  step.chosen = step.candidates[pick];
  step.score = scores[pick];
  return step;
}

namespace {

void push_sequential(ExecutionState& exec, ElemIdx activity) { exec.pending.push_back(PendingSequential{activity, {}, {}}); }

// Marks the innermost frame's current child done and pops every frame that
// becomes complete, cascading outwards.
void book_completion(ExecutionState& exec, const Scenario& s) {
  while (!exec.pending.empty()) {
    auto& top = exec.pending.back();
    if (!top.current) return;
    auto pos = std::lower_bound(top.completed.begin(), top.completed.end(), *top.current);
    if (pos == top.completed.end() || *pos != *top.current) top.completed.insert(pos, *top.current);
    top.current.reset();
    if (top.completed.size() < s.children(top.activity, RelationType::PartOf).size()) return;
    exec.pending.pop_back();
  }
}

}  // namespace

CycleResult decision_cycle(AgentState& agent, const ContextSnapshot& ctx, const Scenario& s, Rng& rng) {
  CycleResult result;
  ElemIdx node = agent.root;
  if (!agent.exec.pending.empty()) {
    node = agent.exec.pending.back().activity;
  } else if (s.activity_type(node) == ActivityType::Sequential) {
    push_sequential(agent.exec, node);
  }

  const std::size_t guard = s.element_count() + 1;
  while (s.activity_type(node) != ActivityType::Atomic) {
    if (result.trace.steps.size() >= guard) throw std::logic_error("decision_cycle: activity graph has a cycle");
    DecisionStep step = decide_step(agent, node, ctx, s, rng);
    if (s.activity_type(node) == ActivityType::Sequential) agent.exec.pending.back().current = step.chosen;
    node = step.chosen;
    result.trace.steps.push_back(std::move(step));
    if (s.activity_type(node) == ActivityType::Sequential) push_sequential(agent.exec, node);
  }
  result.atomic = node;
  book_completion(agent.exec, s);
  return result;
}

}  // namespace sopra
