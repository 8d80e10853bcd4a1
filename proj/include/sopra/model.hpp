#pragma once
// Domain types of the social practice agent model.
//
// Two layers:
//   ScenarioData  plain, string-keyed document model (what the JSON file holds)
//   Scenario      immutable, resolved view over a ScenarioData with dense
//                 integer handles for elements and values
//
// Element handles are assigned in lexicographic order of their ids, so
// comparing two ElemIdx compares the underlying ids. Tie-breaking in the
// decision cycle relies on this.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace sopra {

enum class ElementKind { Activity, Agent, Location, Resource, Timepoint };
enum class ActivityType { Atomic, Sequential, Abstract };
enum class RelationType { IsA, PartOf };

enum class PressureAggregation { Mean, Max, Sum };
enum class DecayMode { Default, DecayAll };
enum class TieBreak { Lexicographic, Random };

std::string_view to_string(ElementKind k);
std::string_view to_string(ActivityType t);
std::string_view to_string(RelationType r);
std::string_view to_string(PressureAggregation a);
std::string_view to_string(DecayMode m);
std::string_view to_string(TieBreak t);

std::optional<ElementKind> parse_element_kind(std::string_view s);
std::optional<ActivityType> parse_activity_type(std::string_view s);
std::optional<RelationType> parse_relation_type(std::string_view s);
std::optional<PressureAggregation> parse_pressure_aggregation(std::string_view s);
std::optional<DecayMode> parse_decay_mode(std::string_view s);
std::optional<TieBreak> parse_tie_break(std::string_view s);

// Implicit strength, explicit self-belief, belief about the collective.
// An unset myCollectiveView means "not yet formed"; it reads as 0.
struct ViewTriple {
  double strength = 0.0;
  double personalView = 0.0;
  std::optional<double> myCollectiveView;

  double collective() const { return myCollectiveView.value_or(0.0); }
  bool in_unit_range() const;
  bool operator==(const ViewTriple&) const = default;
};

struct ContextElement {
  std::string id;
  ElementKind kind = ElementKind::Location;
  std::optional<std::string> parent;
  bool operator==(const ContextElement&) const = default;
};

struct ActivityDecl {
  std::string id;
  ActivityType type = ActivityType::Atomic;
  bool operator==(const ActivityDecl&) const = default;
};

struct ActivityConnection {
  std::string child;
  std::string parent;
  RelationType relation = RelationType::IsA;
  bool operator==(const ActivityConnection&) const = default;
};

struct AgentDecl {
  std::string id;
  double habitRate = 0.1;
  std::int64_t attentionalResources = 0;
  std::int64_t attentionBudget = 0;
  std::string location;
  std::optional<std::string> root;
  bool operator==(const AgentDecl&) const = default;
};

struct HabitualConnectionDecl {
  std::string agent;
  std::string activity;
  std::string contextElement;
  ViewTriple views;
  bool operator==(const HabitualConnectionDecl&) const = default;
};

struct ValuePriorityDecl {
  std::string agent;
  std::string value;
  ViewTriple views;
  bool operator==(const ValuePriorityDecl&) const = default;
};

struct ValueConnectionDecl {
  std::string agent;
  std::string activity;
  std::string value;
  ViewTriple views;
  bool operator==(const ValueConnectionDecl&) const = default;
};

// Per-agent belief about how two activities relate. Missing labels fall back
// to the ground-truth ActivityConnection.
struct ActivityBeliefDecl {
  std::string agent;
  std::string child;
  std::string parent;
  std::optional<RelationType> personalView;
  std::optional<RelationType> myCollectiveView;
  bool operator==(const ActivityBeliefDecl&) const = default;
};

struct ResourcePlacement {
  std::string location;
  std::string resource;
  bool operator==(const ResourcePlacement&) const = default;
};

// Scripted relocation. Takes effect at the end of `tick`, so the agent
// perceives the new location from tick + 1 on.
struct Move {
  std::int64_t tick = 0;
  std::string agent;
  std::string location;
  bool operator==(const Move&) const = default;
};

struct Environment {
  std::vector<std::string> timepoints;  // cycled: tick t sees timepoints[t % n]
  std::vector<ResourcePlacement> resources;
  std::vector<Move> moves;
  bool operator==(const Environment&) const = default;
};

struct Globals {
  double habitThreshold = 0.5;
  double decayRate = 0.0;
  double socialLearningRate = 0.1;
  double awarenessRate = 0.1;
  double attenuation = 0.5;
  std::int64_t deliberationCost = 1;
  PressureAggregation pressureAggregation = PressureAggregation::Mean;
  DecayMode decayMode = DecayMode::Default;
  TieBreak tieBreak = TieBreak::Lexicographic;
  bool extensionsEnabled = false;
  double feasibilityThreshold = 0.0;
  bool operator==(const Globals&) const = default;
};

struct AffordanceDecl {
  std::string contextElement;
  std::string activity;
  double strength = 1.0;
  bool operator==(const AffordanceDecl&) const = default;
};

struct CompetenceLevel {
  std::string agent;
  std::string competence;
  double level = 0.0;
  bool operator==(const CompetenceLevel&) const = default;
};

struct CompetenceRequirement {
  std::string activity;
  std::string competence;
  double required = 0.0;
  bool operator==(const CompetenceRequirement&) const = default;
};

struct ScenarioData {
  std::vector<ContextElement> contextElements;
  std::vector<ActivityDecl> activities;
  std::vector<ActivityConnection> activityConnections;
  std::vector<std::string> values;
  std::vector<AgentDecl> agents;
  std::vector<HabitualConnectionDecl> habitualConnections;
  std::vector<ValuePriorityDecl> valuePriorities;
  std::vector<ValueConnectionDecl> valueConnections;
  std::vector<ActivityBeliefDecl> activityBeliefs;
  std::vector<std::string> roots;
  Environment environment;
  Globals globals;
  std::vector<AffordanceDecl> affordances;
  std::vector<CompetenceLevel> competenceLevels;
  std::vector<CompetenceRequirement> competenceRequirements;
  bool operator==(const ScenarioData&) const = default;
};

// ---------------------------------------------------------------------------
// Resolved scenario

enum class ElemIdx : std::int32_t {};
enum class ValueIdx : std::int32_t {};

constexpr std::int32_t to_int(ElemIdx e) { return static_cast<std::int32_t>(e); }
constexpr std::int32_t to_int(ValueIdx v) { return static_cast<std::int32_t>(v); }

class BuildError : public std::runtime_error {
 public:
  BuildError(std::string message, std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

class UnknownId : public std::invalid_argument {
 public:
  explicit UnknownId(const std::string& id);
};

struct AgentInfo {
  ElemIdx element;
  std::size_t decl;  // position in ScenarioData::agents
  ElemIdx root;
  ElemIdx location;
};

class Scenario {
 public:
  // Resolves every reference. Throws BuildError on duplicate ids, dangling
  // references and documents without activities. Structural problems that
  // do not prevent resolution (cycles, typing, ranges) are left for
  // validate_scenario to report.
  static Scenario build(ScenarioData data);

  const ScenarioData& data() const { return data_; }
  const Globals& globals() const { return data_.globals; }

  std::size_t element_count() const { return ids_.size(); }
  std::size_t value_count() const { return valueIds_.size(); }

  ElemIdx element(std::string_view id) const;  // throws UnknownId
  std::optional<ElemIdx> find_element(std::string_view id) const;
  const std::string& id(ElemIdx e) const { return ids_[to_int(e)]; }
  ElementKind kind(ElemIdx e) const { return kinds_[to_int(e)]; }
  std::optional<ElemIdx> context_parent(ElemIdx e) const;

  ValueIdx value(std::string_view id) const;  // throws UnknownId
  std::optional<ValueIdx> find_value(std::string_view id) const;
  const std::string& id(ValueIdx v) const { return valueIds_[to_int(v)]; }

  bool is_activity(ElemIdx e) const { return kind(e) == ElementKind::Activity; }
  ActivityType activity_type(ElemIdx activity) const;
  // Sorted ascending (lexicographic by id).
  const std::vector<ElemIdx>& children(ElemIdx activity, RelationType r) const;
  std::optional<RelationType> relation(ElemIdx child, ElemIdx parent) const;
  const std::vector<ElemIdx>& activities() const { return activityList_; }
  const std::vector<ElemIdx>& atomic_activities() const { return atomicList_; }

  // Agents in ascending id order; the position is the agent's slot.
  const std::vector<AgentInfo>& agents() const { return agents_; }
  std::size_t agent_slot(std::string_view id) const;  // throws UnknownId
  const AgentDecl& agent_decl(std::size_t slot) const {
    return data_.agents[agents_[slot].decl];
  }

  std::optional<ElemIdx> timepoint_at(std::int64_t tick) const;
  const std::vector<ElemIdx>& resources_at(ElemIdx location) const;
  // Moves scheduled for `tick`, in declaration order.
  std::vector<std::pair<std::size_t, ElemIdx>> moves_at(std::int64_t tick) const;

  // Extensions. Affordances of an activity as (element, strength).
  const std::vector<std::pair<ElemIdx, double>>& affordances_of(ElemIdx activity) const;
  const std::vector<std::pair<std::string, double>>& requirements_of(ElemIdx activity) const;
  double competence_level(std::size_t agentSlot, const std::string& competence) const;

 private:
  Scenario() = default;

  ScenarioData data_;
  std::vector<std::string> ids_;
  std::vector<ElementKind> kinds_;
  std::vector<std::int32_t> parents_;  // -1: none
  std::unordered_map<std::string, std::int32_t> byId_;
  std::vector<ActivityType> activityTypes_;
  std::vector<std::vector<ElemIdx>> isaChildren_;
  std::vector<std::vector<ElemIdx>> partOfChildren_;
  std::map<std::pair<std::int32_t, std::int32_t>, RelationType> relations_;
  std::vector<ElemIdx> activityList_;
  std::vector<ElemIdx> atomicList_;
  std::vector<std::string> valueIds_;
  std::unordered_map<std::string, std::int32_t> valueById_;
  std::vector<AgentInfo> agents_;
  std::unordered_map<std::string, std::size_t> agentSlots_;
  std::vector<ElemIdx> timepoints_;
  std::vector<std::vector<ElemIdx>> resourcesAt_;
  std::multimap<std::int64_t, std::pair<std::size_t, ElemIdx>> moves_;
  std::vector<std::vector<std::pair<ElemIdx, double>>> affordances_;
  std::vector<std::vector<std::pair<std::string, double>>> requirements_;
  std::vector<std::map<std::string, double>> competenceLevels_;
};

// Parent chain of `e` from nearest to root; empty when e has no parent.
std::vector<ElemIdx> context_ancestors(ElemIdx e, const Scenario& s);
std::vector<std::string> context_ancestors(std::string_view id, const Scenario& s);

}  // namespace sopra
