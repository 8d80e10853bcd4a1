#include "sopra/model.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace sopra {

namespace {

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(std::string_view s,
                           const std::array<std::pair<std::string_view, Enum>, N>& table) {
  for (const auto& [name, value] : table) {
    if (name == s) return value;
  }
  return std::nullopt;
}

constexpr std::array<std::pair<std::string_view, ElementKind>, 5> kElementKinds{{
    {"Activity", ElementKind::Activity},
    {"Agent", ElementKind::Agent},
    {"Location", ElementKind::Location},
    {"Resource", ElementKind::Resource},
    {"Timepoint", ElementKind::Timepoint},
}};
constexpr std::array<std::pair<std::string_view, ActivityType>, 3> kActivityTypes{{
    {"Atomic", ActivityType::Atomic},
    {"Sequential", ActivityType::Sequential},
    {"Abstract", ActivityType::Abstract},
}};
constexpr std::array<std::pair<std::string_view, RelationType>, 2> kRelations{{
    {"IsA", RelationType::IsA},
    {"PartOf", RelationType::PartOf},
}};
constexpr std::array<std::pair<std::string_view, PressureAggregation>, 3> kAggregations{{
    {"mean", PressureAggregation::Mean},
    {"max", PressureAggregation::Max},
    {"sum", PressureAggregation::Sum},
}};
constexpr std::array<std::pair<std::string_view, DecayMode>, 2> kDecayModes{{
    {"default", DecayMode::Default},
    {"decayAll", DecayMode::DecayAll},
}};
constexpr std::array<std::pair<std::string_view, TieBreak>, 2> kTieBreaks{{
    {"lexicographic", TieBreak::Lexicographic},
    {"random", TieBreak::Random},
}};

template <typename Enum, std::size_t N>
std::string_view name_of(Enum e, const std::array<std::pair<std::string_view, Enum>, N>& table) {
  for (const auto& [name, value] : table) {
    if (value == e) return name;
  }
  return "?";
}

const std::vector<ElemIdx> kNoElements;
const std::vector<std::pair<ElemIdx, double>> kNoAffordances;
const std::vector<std::pair<std::string, double>> kNoRequirements;

}  // namespace

std::string_view to_string(ElementKind k) { return name_of(k, kElementKinds); }
std::string_view to_string(ActivityType t) { return name_of(t, kActivityTypes); }
std::string_view to_string(RelationType r) { return name_of(r, kRelations); }
std::string_view to_string(PressureAggregation a) { return name_of(a, kAggregations); }
std::string_view to_string(DecayMode m) { return name_of(m, kDecayModes); }
std::string_view to_string(TieBreak t) { return name_of(t, kTieBreaks); }

std::optional<ElementKind> parse_element_kind(std::string_view s) { return lookup(s, kElementKinds); }
std::optional<ActivityType> parse_activity_type(std::string_view s) { return lookup(s, kActivityTypes); }
std::optional<RelationType> parse_relation_type(std::string_view s) { return lookup(s, kRelations); }
std::optional<PressureAggregation> parse_pressure_aggregation(std::string_view s) {
  return lookup(s, kAggregations);
}
std::optional<DecayMode> parse_decay_mode(std::string_view s) { return lookup(s, kDecayModes); }
std::optional<TieBreak> parse_tie_break(std::string_view s) { return lookup(s, kTieBreaks); }

bool ViewTriple::in_unit_range() const {
  auto unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  return unit(strength) && unit(personalView) && (!myCollectiveView || unit(*myCollectiveView));
}

BuildError::BuildError(std::string message, std::vector<std::string> problems)
    : std::runtime_error(std::move(message)), problems_(std::move(problems)) {}

UnknownId::UnknownId(const std::string& id) : std::invalid_argument("unknown id '" + id + "'") {}

Scenario Scenario::build(ScenarioData data) {
  std::vector<std::string> problems;

  // Every declaration site contributes (id, kind). Activities and agents are
  // context elements too; listing them again under contextElements is fine as
  // long as the kind agrees.
  std::map<std::string, ElementKind> declared;
  std::map<std::string, std::optional<std::string>> parentOf;
  auto declare = [&](const std::string& id, ElementKind kind, bool fromElements) {
    auto [it, inserted] = declared.emplace(id, kind);
    if (inserted) return;
    if (it->second != kind) {
      problems.push_back("id '" + id + "' declared as both " + std::string(to_string(it->second)) +
                         " and " + std::string(to_string(kind)));
    } else if (fromElements) {
      problems.push_back("duplicate id '" + id + "'");
    }
  };
  std::set<std::string> seenElementIds;
  for (const auto& ce : data.contextElements) {
    if (!seenElementIds.insert(ce.id).second) problems.push_back("duplicate id '" + ce.id + "'");
    declare(ce.id, ce.kind, false);
    parentOf[ce.id] = ce.parent;
  }
  std::set<std::string> seenActivities;
  for (const auto& a : data.activities) {
    if (!seenActivities.insert(a.id).second) problems.push_back("duplicate activity '" + a.id + "'");
    declare(a.id, ElementKind::Activity, false);
  }
  std::set<std::string> seenAgents;
  for (const auto& ag : data.agents) {
    if (!seenAgents.insert(ag.id).second) problems.push_back("duplicate agent '" + ag.id + "'");
    declare(ag.id, ElementKind::Agent, false);
  }
  for (const auto& [id, kind] : declared) {
    if (kind == ElementKind::Activity && !seenActivities.count(id)) {
      problems.push_back("context element '" + id + "' of kind Activity has no activity declaration");
    }
    if (kind == ElementKind::Agent && !seenAgents.count(id)) {
      problems.push_back("context element '" + id + "' of kind Agent has no agent declaration");
    }
  }
  if (data.activities.empty()) problems.push_back("no activities");

  std::set<std::string> valueSet;
  for (const auto& v : data.values) {
    if (!valueSet.insert(v).second) problems.push_back("duplicate value '" + v + "'");
  }

  auto need = [&](const std::string& id, const char* where) {
    if (!declared.count(id)) problems.push_back(std::string(where) + " references undeclared id '" + id + "'");
  };
  auto needValue = [&](const std::string& id, const char* where) {
    if (!valueSet.count(id)) problems.push_back(std::string(where) + " references undeclared value '" + id + "'");
  };
  for (const auto& ce : data.contextElements) {
    if (ce.parent) need(*ce.parent, "context element parent");
  }
  for (const auto& c : data.activityConnections) {
    need(c.child, "activity connection");
    need(c.parent, "activity connection");
  }
  for (const auto& ag : data.agents) {
    need(ag.location, "agent location");
    if (ag.root) need(*ag.root, "agent root");
    else if (data.roots.empty()) problems.push_back("agent '" + ag.id + "' has no root activity");
  }
  for (const auto& h : data.habitualConnections) {
    need(h.agent, "habitual connection");
    need(h.activity, "habitual connection");
    need(h.contextElement, "habitual connection");
  }
  for (const auto& p : data.valuePriorities) {
    need(p.agent, "value priority");
    needValue(p.value, "value priority");
  }
  for (const auto& c : data.valueConnections) {
    need(c.agent, "value connection");
    need(c.activity, "value connection");
    needValue(c.value, "value connection");
  }
  for (const auto& b : data.activityBeliefs) {
    need(b.agent, "activity belief");
    need(b.child, "activity belief");
    need(b.parent, "activity belief");
  }
  for (const auto& r : data.roots) need(r, "roots");
  for (const auto& t : data.environment.timepoints) need(t, "environment timepoint");
  for (const auto& p : data.environment.resources) {
    need(p.location, "resource placement");
    need(p.resource, "resource placement");
  }
  for (const auto& m : data.environment.moves) {
    need(m.agent, "move");
    need(m.location, "move");
  }
  for (const auto& a : data.affordances) {
    need(a.contextElement, "affordance");
    need(a.activity, "affordance");
  }
  for (const auto& c : data.competenceLevels) need(c.agent, "competence level");
  for (const auto& c : data.competenceRequirements) need(c.activity, "competence requirement");

  if (!problems.empty()) {
    std::string msg = "scenario cannot be resolved: " + problems.front();
    if (problems.size() > 1) msg += " (and " + std::to_string(problems.size() - 1) + " more)";
    throw BuildError(std::move(msg), std::move(problems));
  }

  Scenario s;
  // std::map iteration is sorted, which gives lexicographic handles.
  for (const auto& [id, kind] : declared) {
    s.byId_.emplace(id, static_cast<std::int32_t>(s.ids_.size()));
    s.ids_.push_back(id);
    s.kinds_.push_back(kind);
  }
  const std::size_t n = s.ids_.size();
  s.parents_.assign(n, -1);
  for (const auto& [id, parent] : parentOf) {
    if (parent) s.parents_[s.byId_.at(id)] = s.byId_.at(*parent);
  }

  s.activityTypes_.assign(n, ActivityType::Atomic);
  for (const auto& a : data.activities) s.activityTypes_[s.byId_.at(a.id)] = a.type;
  for (std::size_t i = 0; i < n; ++i) {
    if (s.kinds_[i] == ElementKind::Activity) {
      s.activityList_.push_back(ElemIdx{static_cast<std::int32_t>(i)});
      if (s.activityTypes_[i] == ActivityType::Atomic) {
        s.atomicList_.push_back(ElemIdx{static_cast<std::int32_t>(i)});
      }
    }
  }

  s.isaChildren_.assign(n, {});
  s.partOfChildren_.assign(n, {});
  for (const auto& c : data.activityConnections) {
    const auto child = s.byId_.at(c.child);
    const auto parent = s.byId_.at(c.parent);
    auto& list = c.relation == RelationType::IsA ? s.isaChildren_[parent] : s.partOfChildren_[parent];
    list.push_back(ElemIdx{child});
    s.relations_.emplace(std::make_pair(child, parent), c.relation);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (auto* list : {&s.isaChildren_[i], &s.partOfChildren_[i]}) {
      std::sort(list->begin(), list->end());
      list->erase(std::unique(list->begin(), list->end()), list->end());
    }
  }

  for (const auto& v : valueSet) {
    s.valueById_.emplace(v, static_cast<std::int32_t>(s.valueIds_.size()));
    s.valueIds_.push_back(v);
  }

  std::vector<std::size_t> order(data.agents.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return data.agents[a].id < data.agents[b].id; });
  for (const auto i : order) {
    const auto& ag = data.agents[i];
    const std::string& rootId = ag.root ? *ag.root : data.roots.front();
    s.agentSlots_.emplace(ag.id, s.agents_.size());
    s.agents_.push_back(AgentInfo{ElemIdx{s.byId_.at(ag.id)}, i, ElemIdx{s.byId_.at(rootId)},
                                  ElemIdx{s.byId_.at(ag.location)}});
  }

  for (const auto& t : data.environment.timepoints) s.timepoints_.push_back(ElemIdx{s.byId_.at(t)});
  s.resourcesAt_.assign(n, {});
  for (const auto& p : data.environment.resources) {
    s.resourcesAt_[s.byId_.at(p.location)].push_back(ElemIdx{s.byId_.at(p.resource)});
  }
  for (auto& list : s.resourcesAt_) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  for (const auto& m : data.environment.moves) {
    s.moves_.emplace(m.tick, std::make_pair(s.agentSlots_.at(m.agent), ElemIdx{s.byId_.at(m.location)}));
  }

  s.affordances_.assign(n, {});
  for (const auto& a : data.affordances) {
    s.affordances_[s.byId_.at(a.activity)].emplace_back(ElemIdx{s.byId_.at(a.contextElement)}, a.strength);
  }
  s.requirements_.assign(n, {});
  for (const auto& r : data.competenceRequirements) {
    s.requirements_[s.byId_.at(r.activity)].emplace_back(r.competence, r.required);
  }
  s.competenceLevels_.assign(s.agents_.size(), {});
  for (const auto& c : data.competenceLevels) {
    s.competenceLevels_[s.agentSlots_.at(c.agent)][c.competence] = c.level;
  }

  s.data_ = std::move(data);
  return s;
}

ElemIdx Scenario::element(std::string_view id) const {
  auto e = find_element(id);
  if (!e) throw UnknownId(std::string(id));
  return *e;
}

std::optional<ElemIdx> Scenario::find_element(std::string_view id) const {
  auto it = byId_.find(std::string(id));
  if (it == byId_.end()) return std::nullopt;
  return ElemIdx{it->second};
}

std::optional<ElemIdx> Scenario::context_parent(ElemIdx e) const {
  const auto p = parents_[to_int(e)];
  if (p < 0) return std::nullopt;
  return ElemIdx{p};
}

ValueIdx Scenario::value(std::string_view id) const {
  auto v = find_value(id);
  if (!v) throw UnknownId(std::string(id));
  return *v;
}

std::optional<ValueIdx> Scenario::find_value(std::string_view id) const {
  auto it = valueById_.find(std::string(id));
  if (it == valueById_.end()) return std::nullopt;
  return ValueIdx{it->second};
}

ActivityType Scenario::activity_type(ElemIdx activity) const { return activityTypes_[to_int(activity)]; }

const std::vector<ElemIdx>& Scenario::children(ElemIdx activity, RelationType r) const {
  return r == RelationType::IsA ? isaChildren_[to_int(activity)] : partOfChildren_[to_int(activity)];
}

std::optional<RelationType> Scenario::relation(ElemIdx child, ElemIdx parent) const {
  auto it = relations_.find({to_int(child), to_int(parent)});
  if (it == relations_.end()) return std::nullopt;
  return it->second;
}

std::size_t Scenario::agent_slot(std::string_view id) const {
  auto it = agentSlots_.find(std::string(id));
  if (it == agentSlots_.end()) throw UnknownId(std::string(id));
  return it->second;
}

std::optional<ElemIdx> Scenario::timepoint_at(std::int64_t tick) const {
  if (timepoints_.empty()) return std::nullopt;
  const auto n = static_cast<std::int64_t>(timepoints_.size());
  return timepoints_[static_cast<std::size_t>(((tick % n) + n) % n)];
}

const std::vector<ElemIdx>& Scenario::resources_at(ElemIdx location) const {
  if (to_int(location) < 0 || static_cast<std::size_t>(to_int(location)) >= resourcesAt_.size()) {
    return kNoElements;
  }
  return resourcesAt_[to_int(location)];
}

std::vector<std::pair<std::size_t, ElemIdx>> Scenario::moves_at(std::int64_t tick) const {
  std::vector<std::pair<std::size_t, ElemIdx>> out;
  auto [lo, hi] = moves_.equal_range(tick);
  for (auto it = lo; it != hi; ++it) out.push_back(it->second);
  return out;
}

const std::vector<std::pair<ElemIdx, double>>& Scenario::affordances_of(ElemIdx activity) const {
  if (static_cast<std::size_t>(to_int(activity)) >= affordances_.size()) return kNoAffordances;
  return affordances_[to_int(activity)];
}

const std::vector<std::pair<std::string, double>>& Scenario::requirements_of(ElemIdx activity) const {
  if (static_cast<std::size_t>(to_int(activity)) >= requirements_.size()) return kNoRequirements;
  return requirements_[to_int(activity)];
}

double Scenario::competence_level(std::size_t agentSlot, const std::string& competence) const {
  const auto& levels = competenceLevels_.at(agentSlot);
  auto it = levels.find(competence);
  return it == levels.end() ? 0.0 : it->second;
}

std::vector<ElemIdx> context_ancestors(ElemIdx e, const Scenario& s) {
  std::vector<ElemIdx> chain;
  auto p = s.context_parent(e);
  // Bounded by element count so a cyclic (invalid) hierarchy cannot hang.
  while (p && chain.size() < s.element_count()) {
    chain.push_back(*p);
    p = s.context_parent(*p);
  }
  return chain;
}

std::vector<std::string> context_ancestors(std::string_view id, const Scenario& s) {
  std::vector<std::string> out;
  for (const auto e : context_ancestors(s.element(id), s)) out.push_back(s.id(e));
  return out;
}

}  // namespace sopra
