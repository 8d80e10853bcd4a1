#include "sopra/state.hpp"

#include <algorithm>

namespace sopra {

ContextSnapshot ContextSnapshot::of(std::vector<ElemIdx> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  return ContextSnapshot{std::move(elements)};
}

bool ContextSnapshot::contains(ElemIdx e) const { return std::binary_search(present.begin(), present.end(), e); }

namespace {

template <typename Map, typename Key>
const ViewTriple* find_in(const Map& m, const Key& k) {
  auto it = m.find(k);
  return it == m.end() ? nullptr : &it->second;
}

}  // namespace

const ViewTriple* AgentState::habit(ElemIdx activity, ElemIdx element) const {
  return find_in(habits, HabitKey{activity, element});
}

const ViewTriple* AgentState::priority(ValueIdx v) const { return find_in(priorities, v); }

const ViewTriple* AgentState::value_connection(ElemIdx activity, ValueIdx v) const {
  return find_in(valueConnections, ValueKey{activity, v});
}

AgentState initial_agent_state(const Scenario& s, std::size_t slot) {
  const AgentInfo& info = s.agents().at(slot);
  const AgentDecl& decl = s.agent_decl(slot);

  AgentState a;
  a.slot = slot;
  a.self = info.element;
  a.root = info.root;
  a.location = info.location;
  a.habitRate = decl.habitRate;
  a.attentionalResources = decl.attentionalResources;
  a.attentionBudget = decl.attentionBudget;

  for (const auto& h : s.data().habitualConnections) {
    if (h.agent != decl.id) continue;
    a.habits[{s.element(h.activity), s.element(h.contextElement)}] = h.views;
  }
  for (const auto& p : s.data().valuePriorities) {
    if (p.agent != decl.id) continue;
    a.priorities[s.value(p.value)] = p.views;
  }
  for (const auto& c : s.data().valueConnections) {
    if (c.agent != decl.id) continue;
    a.valueConnections[{s.element(c.activity), s.value(c.value)}] = c.views;
  }
  return a;
}

}  // namespace sopra
