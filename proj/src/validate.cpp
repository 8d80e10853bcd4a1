#include "sopra/validate.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "sopra/scenario_io.hpp"

namespace sopra {

std::string_view to_string(ViolationClass c) {
  switch (c) {
    case ViolationClass::Cycle: return "cycle";
    case ViolationClass::Disjointness: return "disjointness";
    case ViolationClass::Typing: return "typing";
    case ViolationClass::AtomicWithChildren: return "atomic-with-children";
    case ViolationClass::DanglingReference: return "dangling-reference";
    case ViolationClass::ViewRange: return "view-range";
    case ViolationClass::Multiplicity: return "multiplicity";
    case ViolationClass::ContextHierarchy: return "context-hierarchy";
    case ViolationClass::ParameterRange: return "parameter-range";
    case ViolationClass::Structure: return "structure";
  }
  return "?";
}

bool ValidationReport::has(ViolationClass c) const {
  return std::any_of(violations.begin(), violations.end(), [c](const Violation& v) { return v.cls == c; });
}

std::vector<std::string> ValidationReport::lines() const {
  std::vector<std::string> out;
  out.reserve(violations.size());
  for (const auto& v : violations) out.push_back(std::string(to_string(v.cls)) + ": " + v.message);
  return out;
}

namespace {

std::string q(const std::string& s) { return "'" + s + "'"; }

class Checker {
 public:
  explicit Checker(const ScenarioData& d) : d_(d) {}

  ValidationReport run() {
    collect_declarations();
    check_references();
    check_multiplicity();
    check_ranges();
    check_activity_typing();
    check_activity_cycles();
    check_context_hierarchy();
    check_structure();
    return std::move(report_);
  }

 private:
  void add(ViolationClass c, std::string msg) { report_.violations.push_back({c, std::move(msg)}); }

  void declare(const std::string& id, ElementKind kind, const char* site) {
    auto [it, inserted] = kinds_.emplace(id, kind);
    if (!inserted && it->second != kind) {
      add(ViolationClass::Disjointness, "id " + q(id) + " is declared as " + std::string(to_string(it->second)) +
                                            " and as " + std::string(to_string(kind)) + " (" + site + ")");
    }
  }

  void collect_declarations() {
    std::set<std::string> seen;
    for (const auto& ce : d_.contextElements) {
      if (!seen.insert(ce.id).second) add(ViolationClass::Multiplicity, "context element " + q(ce.id) + " declared twice");
      declare(ce.id, ce.kind, "contextElements");
    }
    for (const auto& a : d_.activities) {
      if (!activities_.emplace(a.id, a.type).second) {
        add(ViolationClass::Multiplicity, "activity " + q(a.id) + " declared twice");
      }
      declare(a.id, ElementKind::Activity, "activities");
    }
    for (const auto& ag : d_.agents) {
      if (!agents_.insert(ag.id).second) add(ViolationClass::Multiplicity, "agent " + q(ag.id) + " declared twice");
      declare(ag.id, ElementKind::Agent, "agents");
    }
    for (const auto& ce : d_.contextElements) {
      if (ce.kind == ElementKind::Activity && !activities_.count(ce.id)) {
        add(ViolationClass::Structure, "context element " + q(ce.id) + " has kind Activity but no activity declaration");
      }
      if (ce.kind == ElementKind::Agent && !agents_.count(ce.id)) {
        add(ViolationClass::Structure, "context element " + q(ce.id) + " has kind Agent but no agent declaration");
      }
    }
    for (const auto& v : d_.values) {
      if (!values_.insert(v).second) add(ViolationClass::Multiplicity, "value " + q(v) + " declared twice");
    }
  }

  // True when `id` is declared with the expected kind.
  bool expect(const std::string& id, ElementKind kind, const std::string& where) {
    auto it = kinds_.find(id);
    if (it == kinds_.end()) {
      add(ViolationClass::DanglingReference, where + " references undeclared " + std::string(to_string(kind)) + " " + q(id));
      return false;
    }
    if (it->second != kind) {
      add(ViolationClass::Disjointness, where + " uses " + std::string(to_string(it->second)) + " " + q(id) + " as a " +
                                            std::string(to_string(kind)));
      return false;
    }
    return true;
  }

  bool expect_any(const std::string& id, const std::string& where) {
    if (kinds_.count(id)) return true;
    add(ViolationClass::DanglingReference, where + " references undeclared context element " + q(id));
    return false;
  }

  bool expect_value(const std::string& id, const std::string& where) {
    if (values_.count(id)) return true;
    add(ViolationClass::DanglingReference, where + " references undeclared value " + q(id));
    return false;
  }

  void check_references() {
    for (const auto& ce : d_.contextElements) {
      if (ce.parent) expect_any(*ce.parent, "context element " + q(ce.id) + " parent");
    }
    for (const auto& c : d_.activityConnections) {
      const std::string where = "activity connection " + q(c.child) + " -> " + q(c.parent);
      expect(c.child, ElementKind::Activity, where);
      expect(c.parent, ElementKind::Activity, where);
    }
    for (const auto& ag : d_.agents) {
      expect(ag.location, ElementKind::Location, "agent " + q(ag.id) + " location");
      if (ag.root) expect(*ag.root, ElementKind::Activity, "agent " + q(ag.id) + " root");
    }
    for (const auto& h : d_.habitualConnections) {
      const std::string where = "habitual connection (" + h.agent + ", " + h.activity + ", " + h.contextElement + ")";
      expect(h.agent, ElementKind::Agent, where);
      expect(h.activity, ElementKind::Activity, where);
      expect_any(h.contextElement, where);
    }
    for (const auto& p : d_.valuePriorities) {
      const std::string where = "value priority (" + p.agent + ", " + p.value + ")";
      expect(p.agent, ElementKind::Agent, where);
      expect_value(p.value, where);
    }
    for (const auto& c : d_.valueConnections) {
      const std::string where = "value connection (" + c.agent + ", " + c.activity + ", " + c.value + ")";
      expect(c.agent, ElementKind::Agent, where);
      expect(c.activity, ElementKind::Activity, where);
      expect_value(c.value, where);
    }
    for (const auto& b : d_.activityBeliefs) {
      const std::string where = "activity belief (" + b.agent + ", " + b.child + ", " + b.parent + ")";
      expect(b.agent, ElementKind::Agent, where);
      expect(b.child, ElementKind::Activity, where);
      expect(b.parent, ElementKind::Activity, where);
    }
    for (const auto& r : d_.roots) expect(r, ElementKind::Activity, "roots");
    for (const auto& t : d_.environment.timepoints) expect(t, ElementKind::Timepoint, "environment timepoints");
    for (const auto& p : d_.environment.resources) {
      const std::string where = "resource placement (" + p.location + ", " + p.resource + ")";
      expect(p.location, ElementKind::Location, where);
      expect(p.resource, ElementKind::Resource, where);
    }
    for (const auto& m : d_.environment.moves) {
      const std::string where = "move of " + q(m.agent) + " at tick " + std::to_string(m.tick);
      expect(m.agent, ElementKind::Agent, where);
      expect(m.location, ElementKind::Location, where);
    }
    for (const auto& a : d_.affordances) {
      const std::string where = "affordance (" + a.contextElement + ", " + a.activity + ")";
      expect_any(a.contextElement, where);
      expect(a.activity, ElementKind::Activity, where);
    }
    for (const auto& c : d_.competenceLevels) expect(c.agent, ElementKind::Agent, "competence level of " + q(c.agent));
    for (const auto& c : d_.competenceRequirements) {
      expect(c.activity, ElementKind::Activity, "competence requirement of " + q(c.activity));
    }
  }

  template <typename Key>
  void unique(std::set<Key>& seen, const Key& key, const std::string& what) {
    if (!seen.insert(key).second) add(ViolationClass::Multiplicity, what + " declared more than once");
  }

  void check_multiplicity() {
    std::set<std::pair<std::string, std::string>> edges;
    for (const auto& c : d_.activityConnections) {
      unique(edges, {c.child, c.parent}, "activity connection " + q(c.child) + " -> " + q(c.parent));
    }
    std::set<std::tuple<std::string, std::string, std::string>> habits;
    for (const auto& h : d_.habitualConnections) {
      unique(habits, {h.agent, h.activity, h.contextElement},
             "habitual connection (" + h.agent + ", " + h.activity + ", " + h.contextElement + ")");
    }
    std::set<std::pair<std::string, std::string>> priorities;
    for (const auto& p : d_.valuePriorities) {
      unique(priorities, {p.agent, p.value}, "value priority (" + p.agent + ", " + p.value + ")");
    }
    std::set<std::tuple<std::string, std::string, std::string>> valueConns;
    for (const auto& c : d_.valueConnections) {
      unique(valueConns, {c.agent, c.activity, c.value},
             "value connection (" + c.agent + ", " + c.activity + ", " + c.value + ")");
    }
    std::set<std::tuple<std::string, std::string, std::string>> beliefs;
    for (const auto& b : d_.activityBeliefs) {
      unique(beliefs, {b.agent, b.child, b.parent}, "activity belief (" + b.agent + ", " + b.child + ", " + b.parent + ")");
    }
    std::set<std::pair<std::string, std::string>> affordances;
    for (const auto& a : d_.affordances) {
      unique(affordances, {a.contextElement, a.activity}, "affordance (" + a.contextElement + ", " + a.activity + ")");
    }
    std::set<std::pair<std::string, std::string>> levels;
    for (const auto& c : d_.competenceLevels) {
      unique(levels, {c.agent, c.competence}, "competence level (" + c.agent + ", " + c.competence + ")");
    }
    std::set<std::pair<std::string, std::string>> reqs;
    for (const auto& c : d_.competenceRequirements) {
      unique(reqs, {c.activity, c.competence}, "competence requirement (" + c.activity + ", " + c.competence + ")");
    }
  }

  void unit(double v, const std::string& what) {
    if (!(v >= 0.0 && v <= 1.0)) {
      std::ostringstream msg;
      msg << what << " = " << v << " is outside [0,1]";
      add(ViolationClass::ViewRange, msg.str());
    }
  }

  void views(const ViewTriple& v, const std::string& what) {
    unit(v.strength, what + " strength");
    unit(v.personalView, what + " personalView");
    if (v.myCollectiveView) unit(*v.myCollectiveView, what + " myCollectiveView");
  }

  void check_ranges() {
    for (const auto& h : d_.habitualConnections) {
      views(h.views, "habitual connection (" + h.agent + ", " + h.activity + ", " + h.contextElement + ")");
    }
    for (const auto& p : d_.valuePriorities) views(p.views, "value priority (" + p.agent + ", " + p.value + ")");
    for (const auto& c : d_.valueConnections) {
      views(c.views, "value connection (" + c.agent + ", " + c.activity + ", " + c.value + ")");
    }
    for (const auto& a : d_.affordances) unit(a.strength, "affordance (" + a.contextElement + ", " + a.activity + ")");
    for (const auto& c : d_.competenceLevels) unit(c.level, "competence level (" + c.agent + ", " + c.competence + ")");
    for (const auto& c : d_.competenceRequirements) {
      unit(c.required, "competence requirement (" + c.activity + ", " + c.competence + ")");
    }

    for (auto& p : check_globals(d_.globals)) add(ViolationClass::ParameterRange, "globals: " + p);
    for (const auto& ag : d_.agents) {
      const std::string who = "agent " + q(ag.id);
      if (!(ag.habitRate > 0.0 && ag.habitRate <= 1.0)) {
        std::ostringstream msg;
        msg << who << " habitRate = " << ag.habitRate << " is outside (0,1]";
        add(ViolationClass::ParameterRange, msg.str());
      }
      if (ag.attentionBudget < 0) add(ViolationClass::ParameterRange, who + " attentionBudget is negative");
      if (ag.attentionalResources < 0) add(ViolationClass::ParameterRange, who + " attentionalResources is negative");
      if (ag.attentionalResources > ag.attentionBudget) {
        add(ViolationClass::ParameterRange, who + " attentionalResources exceeds attentionBudget");
      }
    }
    for (const auto& m : d_.environment.moves) {
      if (m.tick < 0) add(ViolationClass::ParameterRange, "move of " + q(m.agent) + " has negative tick");
    }
  }

  std::optional<ActivityType> type_of(const std::string& id) const {
    auto it = activities_.find(id);
    if (it == activities_.end()) return std::nullopt;
    return it->second;
  }

  void check_activity_typing() {
    for (const auto& c : d_.activityConnections) {
      auto parent = type_of(c.parent);
      if (!parent || !type_of(c.child)) continue;
      const std::string edge = q(c.child) + " " + std::string(to_string(c.relation)) + " " + q(c.parent);
      if (*parent == ActivityType::Atomic) {
        add(ViolationClass::AtomicWithChildren, "atomic activity " + q(c.parent) + " has child (" + edge + ")");
      } else if (*parent == ActivityType::Abstract && c.relation != RelationType::IsA) {
        add(ViolationClass::Typing, "abstract activity " + q(c.parent) + " may only have IsA children (" + edge + ")");
      } else if (*parent == ActivityType::Sequential && c.relation != RelationType::PartOf) {
        add(ViolationClass::Typing,
            "sequential activity " + q(c.parent) + " may only have PartOf children (" + edge + ")");
      }
    }
  }

  void check_activity_cycles() {
    std::map<std::string, std::vector<std::string>> childrenOf;
    for (const auto& c : d_.activityConnections) {
      if (c.child == c.parent) {
        add(ViolationClass::Cycle, "activity " + q(c.child) + " is its own " + std::string(to_string(c.relation)) + " parent");
        continue;
      }
      if (type_of(c.child) && type_of(c.parent)) childrenOf[c.parent].push_back(c.child);
    }
    // Iterative three-colour DFS; one violation per back edge.
    enum Colour { White, Grey, Black };
    std::map<std::string, Colour> colour;
    for (const auto& [id, type] : activities_) colour[id] = White;
    for (const auto& [start, type] : activities_) {
      if (colour[start] != White) continue;
      std::vector<std::pair<std::string, std::size_t>> stack{{start, 0}};
      colour[start] = Grey;
      while (!stack.empty()) {
        auto& [node, next] = stack.back();
        const auto& kids = childrenOf[node];
        if (next < kids.size()) {
          const std::string child = kids[next++];
          if (colour[child] == Grey) {
            add(ViolationClass::Cycle, "activity graph has a cycle through " + q(child) + " and " + q(node));
          } else if (colour[child] == White) {
            colour[child] = Grey;
            stack.emplace_back(child, 0);
          }
        } else {
          colour[node] = Black;
          stack.pop_back();
        }
      }
    }
  }

  void check_context_hierarchy() {
    std::map<std::string, std::string> parentOf;
    for (const auto& ce : d_.contextElements) {
      if (!ce.parent) continue;
      if (ce.kind == ElementKind::Activity) {
        add(ViolationClass::ContextHierarchy,
            "activity " + q(ce.id) + " has a context parent; activities relate through activity connections");
        continue;
      }
      auto it = kinds_.find(*ce.parent);
      if (it == kinds_.end()) continue;  // dangling, already reported
      if (it->second != ce.kind) {
        add(ViolationClass::ContextHierarchy, std::string(to_string(ce.kind)) + " " + q(ce.id) + " has parent " +
                                                  q(*ce.parent) + " of kind " + std::string(to_string(it->second)));
      }
      parentOf[ce.id] = *ce.parent;
    }
    std::set<std::string> reported;
    for (const auto& [start, p] : parentOf) {
      std::set<std::string> path{start};
      std::string cur = start;
      while (true) {
        auto it = parentOf.find(cur);
        if (it == parentOf.end()) break;
        cur = it->second;
        if (!path.insert(cur).second) {
          if (cur == start && !reported.count(start)) {
            for (const auto& n : path) reported.insert(n);
            add(ViolationClass::Cycle, "context hierarchy has a cycle through " + q(start));
          }
          break;
        }
      }
    }
  }

  void check_structure() {
    if (d_.activities.empty()) add(ViolationClass::Structure, "no activities");
    if (d_.roots.empty() && !d_.agents.empty()) {
      for (const auto& ag : d_.agents) {
        if (!ag.root) add(ViolationClass::Structure, "agent " + q(ag.id) + " has no root activity");
      }
    }
    std::set<std::string> rootSet(d_.roots.begin(), d_.roots.end());
    for (const auto& ag : d_.agents) {
      if (ag.root && type_of(*ag.root) && !rootSet.count(*ag.root)) {
        add(ViolationClass::Structure, "agent " + q(ag.id) + " root " + q(*ag.root) + " is not listed in roots");
      }
    }
    std::map<std::string, std::set<RelationType>> relationsBelow;
    for (const auto& c : d_.activityConnections) relationsBelow[c.parent].insert(c.relation);
    for (const auto& [id, type] : activities_) {
      if (type == ActivityType::Atomic) continue;
      const RelationType wanted = type == ActivityType::Abstract ? RelationType::IsA : RelationType::PartOf;
      if (!relationsBelow[id].count(wanted)) {
        add(ViolationClass::Structure, std::string(to_string(type)) + " activity " + q(id) + " has no " +
                                           std::string(to_string(wanted)) + " children");
      }
    }
  }

  const ScenarioData& d_;
  ValidationReport report_;
  std::map<std::string, ElementKind> kinds_;
  std::map<std::string, ActivityType> activities_;
  std::set<std::string> agents_;
  std::set<std::string> values_;
};

}  // namespace

ValidationReport validate_document(const ScenarioData& data) { return Checker(data).run(); }

ValidationReport validate_scenario(const Scenario& s) { return validate_document(s.data()); }

}  // namespace sopra
