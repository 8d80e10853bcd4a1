#include "sopra/scenario_io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace sopra {

using nlohmann::json;

namespace {

// Field reader that reports the JSON path on every failure and rejects keys
// it was never asked about.
class Fields {
 public:
  Fields(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) fail(path_, "expected an object");
  }

  [[noreturn]] static void fail(const std::string& path, const std::string& what) {
    throw ParseError(path + ": " + what);
  }

  const json* find(const char* key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    if (it == obj_.end() || it->is_null()) return nullptr;
    return &*it;
  }

  const json& require(const char* key) {
    const json* v = find(key);
    if (!v) fail(path_, std::string("missing field '") + key + "'");
    return *v;
  }

  std::string string(const char* key) { return as_string(require(key), at(key)); }

  std::optional<std::string> opt_string(const char* key) {
    const json* v = find(key);
    if (!v) return std::nullopt;
    return as_string(*v, at(key));
  }

  double number(const char* key) { return as_number(require(key), at(key)); }

  std::optional<double> opt_number(const char* key) {
    const json* v = find(key);
    if (!v) return std::nullopt;
    return as_number(*v, at(key));
  }

  std::int64_t integer(const char* key) { return as_integer(require(key), at(key)); }

  std::optional<std::int64_t> opt_integer(const char* key) {
    const json* v = find(key);
    if (!v) return std::nullopt;
    return as_integer(*v, at(key));
  }

  std::optional<bool> opt_bool(const char* key) {
    const json* v = find(key);
    if (!v) return std::nullopt;
    if (!v->is_boolean()) fail(at(key), "expected a boolean");
    return v->get<bool>();
  }

  void done() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.count(it.key())) fail(path_, "unknown field '" + it.key() + "'");
    }
  }

  std::string at(const char* key) const { return path_ + "." + key; }

  static std::string as_string(const json& v, const std::string& path) {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
  }
  static double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
  }
  static std::int64_t as_integer(const json& v, const std::string& path) {
    if (!v.is_number_integer()) fail(path, "expected an integer");
    return v.get<std::int64_t>();
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename Parse>
auto parse_enum(const std::string& label, const std::string& path, Parse parse) {
  auto v = parse(label);
  if (!v) Fields::fail(path, "unknown label '" + label + "'");
  return *v;
}

template <typename F>
void each(const json& doc, const char* key, F&& f) {
  auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return;
  if (!it->is_array()) Fields::fail(key, "expected an array");
  for (std::size_t i = 0; i < it->size(); ++i) {
    f((*it)[i], std::string(key) + "[" + std::to_string(i) + "]");
  }
}

// strength is required; personalView defaults to strength; myCollectiveView
// stays unset when absent.
ViewTriple read_views(Fields& f) {
  ViewTriple v;
  v.strength = f.number("strength");
  v.personalView = f.opt_number("personalView").value_or(v.strength);
  v.myCollectiveView = f.opt_number("myCollectiveView");
  return v;
}

void write_views(json& out, const ViewTriple& v) {
  out["strength"] = v.strength;
  out["personalView"] = v.personalView;
  out["myCollectiveView"] = v.myCollectiveView ? json(*v.myCollectiveView) : json(nullptr);
}

std::optional<RelationType> opt_relation(Fields& f, const char* key) {
  auto label = f.opt_string(key);
  if (!label) return std::nullopt;
  return parse_enum(*label, f.at(key), parse_relation_type);
}

void read_globals(const json& g, Globals& out) {
  Fields f(g, "globals");
  if (auto v = f.opt_number("habitThreshold")) out.habitThreshold = *v;
  if (auto v = f.opt_number("decayRate")) out.decayRate = *v;
  if (auto v = f.opt_number("socialLearningRate")) out.socialLearningRate = *v;
  if (auto v = f.opt_number("awarenessRate")) out.awarenessRate = *v;
  if (auto v = f.opt_number("attenuation")) out.attenuation = *v;
  if (auto v = f.opt_integer("deliberationCost")) out.deliberationCost = *v;
  if (auto v = f.opt_string("pressureAggregation")) {
    out.pressureAggregation = parse_enum(*v, f.at("pressureAggregation"), parse_pressure_aggregation);
  }
  if (auto v = f.opt_string("decayMode")) out.decayMode = parse_enum(*v, f.at("decayMode"), parse_decay_mode);
  if (auto v = f.opt_string("tieBreak")) out.tieBreak = parse_enum(*v, f.at("tieBreak"), parse_tie_break);
  if (auto v = f.opt_bool("extensionsEnabled")) out.extensionsEnabled = *v;
  if (auto v = f.opt_number("feasibilityThreshold")) out.feasibilityThreshold = *v;
  f.done();
}

json write_globals(const Globals& g) {
  return json{
      {"habitThreshold", g.habitThreshold},
      {"decayRate", g.decayRate},
      {"socialLearningRate", g.socialLearningRate},
      {"awarenessRate", g.awarenessRate},
      {"attenuation", g.attenuation},
      {"deliberationCost", g.deliberationCost},
      {"pressureAggregation", to_string(g.pressureAggregation)},
      {"decayMode", to_string(g.decayMode)},
      {"tieBreak", to_string(g.tieBreak)},
      {"extensionsEnabled", g.extensionsEnabled},
      {"feasibilityThreshold", g.feasibilityThreshold},
  };
}

std::vector<std::string> string_list(const json& doc, const char* key) {
  std::vector<std::string> out;
  each(doc, key, [&](const json& v, const std::string& path) { out.push_back(Fields::as_string(v, path)); });
  return out;
}

}  // namespace

ScenarioData parse_scenario(const json& doc) {
  Fields top(doc, "$");
  ScenarioData d;

  top.find("contextElements");
  each(doc, "contextElements", [&](const json& v, const std::string& path) {
    Fields f(v, path);
    ContextElement ce;
    ce.id = f.string("id");
    ce.kind = parse_enum(f.string("kind"), f.at("kind"), parse_element_kind);
    ce.parent = f.opt_string("parent");
    f.done();
    d.contextElements.push_back(std::move(ce));
  });

  top.find("activities");
  each(doc, "activities", [&](const json& v, const std::string& path) {
    Fields f(v, path);
    ActivityDecl a;
    a.id = f.string("id");
    a.type = parse_enum(f.string("type"), f.at("type"), parse_activity_type);
    f.done();
    d.activities.push_back(std::move(a));
  });

  top.find("activityConnections");
  each(doc, "activityConnections", [&](const json& v, const std::string& path) {
    Fields f(v, path);
    ActivityConnection c;
    c.child = f.string("child");
    c.parent = f.string("parent");
    c.relation = parse_enum(f.string("relation"), f.at("relation"), parse_relation_type);
    f.done();
    d.activityConnections.push_back(std::move(c));
  });

  top.find("values");
  d.values = string_list(doc, "values");

  top.find("agents");
  each(doc, "agents", [&](const json& v, const std::string& path) {
    Fields f(v, path);
    AgentDecl a;
    a.id = f.string("id");
    a.habitRate = f.number("habitRate");
    a.attentionBudget = f.integer("attentionBudget");
    a.attentionalResources = f.opt_integer("attentionalResources").value_or(a.attentionBudget);
    a.location = f.string("location");
    a.root = f.opt_string("root");
    f.done();
    d.agents.push_back(std::move(a));
  });

  top.find("habitualConnections");
  each(doc, "habitualConnections", [&](const json& v, const std::string& path) {
    Fields f(v, path);
    HabitualConnectionDecl h;
    h.agent = f.string("agent");
    h.activity = f.string("activity");
    h.contextElement = f.string("contextElement");
    h.views = read_views(f);
    f.done();
    d.habitualConnections.push_back(std::move(h));
  });

  top.find("valuePriorities");
  each(doc, "valuePriorities", [&](const json& v, const std::string& path) {
    Fields f(v, path);
    ValuePriorityDecl p;
    p.agent = f.string("agent");
    p.value = f.string("value");
    p.views = read_views(f);
    f.done();
    d.valuePriorities.push_back(std::move(p));
  });

  top.find("valueConnections");
  each(doc, "valueConnections", [&](const json& v, const std::string& path) {
    Fields f(v, path);
    ValueConnectionDecl c;
    c.agent = f.string("agent");
    c.activity = f.string("activity");
    c.value = f.string("value");
    c.views = read_views(f);
    f.done();
    d.valueConnections.push_back(std::move(c));
  });

  top.find("activityBeliefs");
  each(doc, "activityBeliefs", [&](const json& v, const std::string& path) {
    Fields f(v, path);
    ActivityBeliefDecl b;
    b.agent = f.string("agent");
    b.child = f.string("child");
    b.parent = f.string("parent");
    b.personalView = opt_relation(f, "personalView");
    b.myCollectiveView = opt_relation(f, "myCollectiveView");
    f.done();
    d.activityBeliefs.push_back(std::move(b));
  });

  top.find("roots");
  d.roots = string_list(doc, "roots");

  if (const json* env = top.find("environment")) {
    Fields f(*env, "environment");
    f.find("timepoints");
    d.environment.timepoints = string_list(*env, "timepoints");
    f.find("resources");
    each(*env, "resources", [&](const json& v, const std::string& path) {
      Fields r(v, "environment." + path);
      ResourcePlacement p;
      p.location = r.string("location");
      p.resource = r.string("resource");
      r.done();
      d.environment.resources.push_back(std::move(p));
    });
    f.find("moves");
    each(*env, "moves", [&](const json& v, const std::string& path) {
      Fields r(v, "environment." + path);
      Move m;
      m.tick = r.integer("tick");
      m.agent = r.string("agent");
      m.location = r.string("location");
      r.done();
      d.environment.moves.push_back(std::move(m));
    });
    f.done();
  }

  if (const json* g = top.find("globals")) read_globals(*g, d.globals);

  top.find("affordances");
  each(doc, "affordances", [&](const json& v, const std::string& path) {
    Fields f(v, path);
    AffordanceDecl a;
    a.contextElement = f.string("contextElement");
    a.activity = f.string("activity");
    a.strength = f.number("strength");
    f.done();
    d.affordances.push_back(std::move(a));
  });

  if (const json* c = top.find("competences")) {
    Fields f(*c, "competences");
    f.find("levels");
    each(*c, "levels", [&](const json& v, const std::string& path) {
      Fields r(v, "competences." + path);
      CompetenceLevel l;
      l.agent = r.string("agent");
      l.competence = r.string("competence");
      l.level = r.number("level");
      r.done();
      d.competenceLevels.push_back(std::move(l));
    });
    f.find("requirements");
    each(*c, "requirements", [&](const json& v, const std::string& path) {
      Fields r(v, "competences." + path);
      CompetenceRequirement q;
      q.activity = r.string("activity");
      q.competence = r.string("competence");
      q.required = r.number("required");
      r.done();
      d.competenceRequirements.push_back(std::move(q));
    });
    f.done();
  }

  top.done();
  return d;
}

ScenarioData parse_scenario_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return parse_scenario(doc);
}

ScenarioData load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read '" + path.string() + "'");
  return parse_scenario_text(buf.str());
}

json to_json(const ScenarioData& d) {
  json out = json::object();

  json elements = json::array();
  for (const auto& ce : d.contextElements) {
    json e{{"id", ce.id}, {"kind", to_string(ce.kind)}};
    if (ce.parent) e["parent"] = *ce.parent;
    elements.push_back(std::move(e));
  }
  out["contextElements"] = std::move(elements);

  json activities = json::array();
  for (const auto& a : d.activities) activities.push_back({{"id", a.id}, {"type", to_string(a.type)}});
  out["activities"] = std::move(activities);

  json connections = json::array();
  for (const auto& c : d.activityConnections) {
    connections.push_back({{"child", c.child}, {"parent", c.parent}, {"relation", to_string(c.relation)}});
  }
  out["activityConnections"] = std::move(connections);

  out["values"] = d.values;

  json agents = json::array();
  for (const auto& a : d.agents) {
    json e{{"id", a.id},
           {"habitRate", a.habitRate},
           {"attentionalResources", a.attentionalResources},
           {"attentionBudget", a.attentionBudget},
           {"location", a.location}};
    if (a.root) e["root"] = *a.root;
    agents.push_back(std::move(e));
  }
  out["agents"] = std::move(agents);

  json habits = json::array();
  for (const auto& h : d.habitualConnections) {
    json e{{"agent", h.agent}, {"activity", h.activity}, {"contextElement", h.contextElement}};
    write_views(e, h.views);
    habits.push_back(std::move(e));
  }
  out["habitualConnections"] = std::move(habits);

  json priorities = json::array();
  for (const auto& p : d.valuePriorities) {
    json e{{"agent", p.agent}, {"value", p.value}};
    write_views(e, p.views);
    priorities.push_back(std::move(e));
  }
  out["valuePriorities"] = std::move(priorities);

  json valueConnections = json::array();
  for (const auto& c : d.valueConnections) {
    json e{{"agent", c.agent}, {"activity", c.activity}, {"value", c.value}};
    write_views(e, c.views);
    valueConnections.push_back(std::move(e));
  }
  out["valueConnections"] = std::move(valueConnections);

  if (!d.activityBeliefs.empty()) {
    json beliefs = json::array();
    for (const auto& b : d.activityBeliefs) {
      json e{{"agent", b.agent}, {"child", b.child}, {"parent", b.parent}};
      e["personalView"] = b.personalView ? json(to_string(*b.personalView)) : json(nullptr);
      e["myCollectiveView"] = b.myCollectiveView ? json(to_string(*b.myCollectiveView)) : json(nullptr);
      beliefs.push_back(std::move(e));
    }
    out["activityBeliefs"] = std::move(beliefs);
  }

  out["roots"] = d.roots;

  json env{{"timepoints", d.environment.timepoints}};
  json resources = json::array();
  for (const auto& r : d.environment.resources) resources.push_back({{"location", r.location}, {"resource", r.resource}});
  env["resources"] = std::move(resources);
  json moves = json::array();
  for (const auto& m : d.environment.moves) {
    moves.push_back({{"tick", m.tick}, {"agent", m.agent}, {"location", m.location}});
  }
  env["moves"] = std::move(moves);
  out["environment"] = std::move(env);

  out["globals"] = write_globals(d.globals);

  if (!d.affordances.empty()) {
    json affordances = json::array();
    for (const auto& a : d.affordances) {
      affordances.push_back({{"contextElement", a.contextElement}, {"activity", a.activity}, {"strength", a.strength}});
    }
    out["affordances"] = std::move(affordances);
  }
  if (!d.competenceLevels.empty() || !d.competenceRequirements.empty()) {
    json levels = json::array();
    for (const auto& l : d.competenceLevels) {
      levels.push_back({{"agent", l.agent}, {"competence", l.competence}, {"level", l.level}});
    }
    json reqs = json::array();
    for (const auto& r : d.competenceRequirements) {
      reqs.push_back({{"activity", r.activity}, {"competence", r.competence}, {"required", r.required}});
    }
    out["competences"] = json{{"levels", std::move(levels)}, {"requirements", std::move(reqs)}};
  }
  return out;
}

std::string serialize_scenario(const ScenarioData& data) { return to_json(data).dump(2) + "\n"; }

Scenario build_scenario(const json& doc) { return Scenario::build(parse_scenario(doc)); }

Scenario build_scenario(std::string_view text) { return Scenario::build(parse_scenario_text(text)); }

const std::vector<std::string>& global_names() {
  static const std::vector<std::string> names{
      "habitThreshold", "decayRate", "socialLearningRate", "awarenessRate",
      "attenuation", "deliberationCost", "pressureAggregation", "decayMode",
      "tieBreak", "extensionsEnabled", "feasibilityThreshold",
  };
  return names;
}

namespace {

double parse_real(std::string_view key, std::string_view text) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument(std::string(key) + ": not a number '" + std::string(text) + "'");
  }
  return v;
}

std::int64_t parse_int(std::string_view key, std::string_view text) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument(std::string(key) + ": not an integer '" + std::string(text) + "'");
  }
  return v;
}

template <typename Parse>
auto parse_label(std::string_view key, std::string_view text, Parse parse) {
  auto v = parse(text);
  if (!v) throw std::invalid_argument(std::string(key) + ": unknown label '" + std::string(text) + "'");
  return *v;
}

}  // namespace

void apply_override(Globals& g, std::string_view key, std::string_view value) {
  Globals next = g;
  if (key == "habitThreshold") next.habitThreshold = parse_real(key, value);
  else if (key == "decayRate") next.decayRate = parse_real(key, value);
  else if (key == "socialLearningRate") next.socialLearningRate = parse_real(key, value);
  else if (key == "awarenessRate") next.awarenessRate = parse_real(key, value);
  else if (key == "attenuation") next.attenuation = parse_real(key, value);
  else if (key == "deliberationCost") next.deliberationCost = parse_int(key, value);
  else if (key == "pressureAggregation") next.pressureAggregation = parse_label(key, value, parse_pressure_aggregation);
  else if (key == "decayMode") next.decayMode = parse_label(key, value, parse_decay_mode);
  else if (key == "tieBreak") next.tieBreak = parse_label(key, value, parse_tie_break);
  else if (key == "extensionsEnabled") {
    if (value == "true") next.extensionsEnabled = true;
    else if (value == "false") next.extensionsEnabled = false;
    else throw std::invalid_argument("extensionsEnabled: expected true or false");
  } else if (key == "feasibilityThreshold") next.feasibilityThreshold = parse_real(key, value);
  else throw std::invalid_argument("unknown global '" + std::string(key) + "'");

  auto problems = check_globals(next);
  if (!problems.empty()) throw std::invalid_argument(problems.front());
  g = next;
}

std::vector<std::string> check_globals(const Globals& g) {
  std::vector<std::string> out;
  auto range = [&](const char* name, double v, bool ok, const char* interval) {
    if (!ok) {
      std::ostringstream msg;
      msg << name << " = " << v << " is outside " << interval;
      out.push_back(msg.str());
    }
  };
  range("habitThreshold", g.habitThreshold, g.habitThreshold >= 0.0 && g.habitThreshold <= 1.0, "[0,1]");
  range("decayRate", g.decayRate, g.decayRate >= 0.0 && g.decayRate < 1.0, "[0,1)");
  range("socialLearningRate", g.socialLearningRate, g.socialLearningRate > 0.0 && g.socialLearningRate <= 1.0,
        "(0,1]");
  range("awarenessRate", g.awarenessRate, g.awarenessRate > 0.0 && g.awarenessRate <= 1.0, "(0,1]");
  range("attenuation", g.attenuation, g.attenuation >= 0.0 && g.attenuation <= 1.0, "[0,1]");
  range("deliberationCost", static_cast<double>(g.deliberationCost), g.deliberationCost >= 1, "[1,inf)");
  range("feasibilityThreshold", g.feasibilityThreshold,
        g.feasibilityThreshold >= 0.0 && g.feasibilityThreshold <= 1.0, "[0,1]");
  return out;
}

}  // namespace sopra
