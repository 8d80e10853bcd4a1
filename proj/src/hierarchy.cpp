#include "sopra/hierarchy.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace sopra {

namespace {

void require_activity(ElemIdx a, const Scenario& s) {
  if (to_int(a) < 0 || static_cast<std::size_t>(to_int(a)) >= s.element_count() || !s.is_activity(a)) {
    throw UnknownId("activity #" + std::to_string(to_int(a)));
  }
}

RelationType implementing_relation(ActivityType t) {
  return t == ActivityType::Sequential ? RelationType::PartOf : RelationType::IsA;
}

double propagate(const AgentState& agent, ValueIdx v, ElemIdx a, const Scenario& s,
                 std::unordered_map<std::int32_t, double>& memo, std::size_t depth) {
  if (auto it = memo.find(to_int(a)); it != memo.end()) return it->second;
  if (depth > s.element_count()) throw std::logic_error("activity graph has a cycle");

  double result = 0.0;
  const ActivityType type = s.activity_type(a);
  if (type == ActivityType::Atomic) {
    const ViewTriple* c = agent.value_connection(a, v);
    result = c ? c->strength : 0.0;
  } else {
    const auto& kids = s.children(a, implementing_relation(type));
    if (kids.empty()) throw std::logic_error("composite activity '" + s.id(a) + "' has no children");
    result = 1.0;
    for (const auto k : kids) result = std::min(result, propagate(agent, v, k, s, memo, depth + 1));
  }
  memo.emplace(to_int(a), result);
  return result;
}

}  // namespace

std::vector<ElemIdx> children(ElemIdx a, RelationType r, const Scenario& s) {
  require_activity(a, s);
  return s.children(a, r);
}

std::vector<ElemIdx> descendants(ElemIdx a, std::optional<RelationType> r, const Scenario& s) {
  require_activity(a, s);
  std::set<ElemIdx> seen;
  std::vector<ElemIdx> frontier{a};
  while (!frontier.empty()) {
    const ElemIdx cur = frontier.back();
    frontier.pop_back();
    for (const RelationType rel : {RelationType::IsA, RelationType::PartOf}) {
      if (r && *r != rel) continue;
      for (const auto c : s.children(cur, rel)) {
        if (seen.insert(c).second) frontier.push_back(c);
      }
    }
  }
  seen.erase(a);
  return {seen.begin(), seen.end()};
}

std::vector<ElemIdx> atomic_leaves(ElemIdx a, const Scenario& s) {
  require_activity(a, s);
  if (s.activity_type(a) == ActivityType::Atomic) return {a};
  std::vector<ElemIdx> out;
  for (const auto d : descendants(a, std::nullopt, s)) {
    if (s.activity_type(d) == ActivityType::Atomic) out.push_back(d);
  }
  return out;
}

double propagate_value_connection(const AgentState& agent, ValueIdx v, ElemIdx a, const Scenario& s) {
  require_activity(a, s);
  if (to_int(v) < 0 || static_cast<std::size_t>(to_int(v)) >= s.value_count()) {
    throw UnknownId("value #" + std::to_string(to_int(v)));
  }
  std::unordered_map<std::int32_t, double> memo;
  return propagate(agent, v, a, s, memo, 0);
}

void project_collective_from_personal(AgentState& agent) {
  auto project = [](ViewTriple& t) {
    if (!t.myCollectiveView) t.myCollectiveView = t.personalView;
  };
  for (auto& [k, t] : agent.habits) project(t);
  for (auto& [k, t] : agent.priorities) project(t);
  for (auto& [k, t] : agent.valueConnections) project(t);
}

ActivityBelief activity_belief(std::size_t agentSlot, ElemIdx child, ElemIdx parent, const Scenario& s) {
  require_activity(child, s);
  require_activity(parent, s);
  ActivityBelief b{child, parent, s.relation(child, parent), s.relation(child, parent)};
  const std::string& agentId = s.agent_decl(agentSlot).id;
  for (const auto& decl : s.data().activityBeliefs) {
    if (decl.agent != agentId || decl.child != s.id(child) || decl.parent != s.id(parent)) continue;
    if (decl.personalView) b.personalView = decl.personalView;
    if (decl.myCollectiveView) b.myCollectiveView = decl.myCollectiveView;
  }
  return b;
}

}  // namespace sopra
