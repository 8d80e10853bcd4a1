#include <algorithm>
#include <map>
#include <numeric>

#include "doctest.h"
#include "fixtures.hpp"
#include "scenario_gen.hpp"
#include "sopra/csv_export.hpp"
#include "sopra/engine.hpp"

using namespace sopra;
using sopra::testing::load_bundled;
using sopra::testing::names;
using sopra::testing::shared;

namespace {

ScenarioData lone_napper(std::size_t agents) {
  ScenarioData d;
  d.activities = {{"nap", ActivityType::Atomic}};
  d.contextElements = {{"L", ElementKind::Location, std::nullopt}, {"Morning", ElementKind::Timepoint, std::nullopt}};
  d.environment.timepoints = {"Morning"};
  for (std::size_t i = 0; i < agents; ++i) {
    d.agents.push_back(AgentDecl{"g" + std::to_string(i), 0.1, 1, 1, "L", std::nullopt});
  }
  d.roots = {"nap"};
  return d;
}

std::int64_t first_habitual_tick(const std::vector<Event>& events) {
  for (const auto& e : events) {
    if (e.mode == DecisionMode::Habitual) return e.tick;
  }
  return -1;
}

}  // namespace

TEST_SUITE("engine") {

TEST_CASE("snapshot of a lone agent without history") {
  const auto s = shared(lone_napper(1));
  World w(s, 1);
  CHECK(names(*s, w.snapshot_context(0).present) == std::vector<std::string>{"L", "Morning"});
  w.step();
  CHECK(names(*s, w.snapshot_context(0).present) == std::vector<std::string>{"L", "Morning", "nap"});
}

TEST_CASE("co-located agents see each other") {
  const auto s = shared(lone_napper(2));
  World w(s, 1);
  CHECK(w.snapshot_context(0).contains(s->element("g1")));
  CHECK(w.snapshot_context(1).contains(s->element("g0")));
  CHECK_FALSE(w.snapshot_context(0).contains(s->element("g0")));
}

TEST_CASE("resources at the location and the previous activity enter the snapshot") {
  const auto s = std::make_shared<const Scenario>(load_bundled("commuting"));
  World w(s, 1);
  const auto bob = s->agent_slot("bob");
  const auto before = w.snapshot_context(bob);
  CHECK(before.contains(s->element("BobsCar")));
  CHECK(before.contains(s->element("Suburb")));
  CHECK_FALSE(before.contains(s->element("TrainStation")));
  w.step();
  CHECK(w.snapshot_context(bob).contains(w.events()[bob].activity));
}

TEST_CASE("one event per agent per step") {
  const auto s = shared(lone_napper(1));
  World w(s, 3);
  for (int t = 0; t < 5; ++t) {
    w.step();
    CHECK(w.events().size() == static_cast<std::size_t>(t + 1));
    CHECK(w.tick() == t + 1);
    CHECK(s->id(w.events().back().activity) == "nap");
    CHECK(w.events().back().tick == t);
  }
}

TEST_CASE("two co-located agents observe each other once per tick") {
  const auto s = shared(lone_napper(2));
  World w(s, 1);
  w.step();
  REQUIRE(w.summaries().size() == 1);
  CHECK(w.summaries()[0].observations == 2);
  // Each has observed the other performing "nap" in L.
  CHECK(w.agent(0).habit(s->element("nap"), s->element("L"))->collective() > 0.0);
}

TEST_CASE("observations count n(n-1) per location") {
  const auto s = std::make_shared<const Scenario>(load_bundled("habit_cascade"));
  World w(s, 1);
  for (int t = 0; t < 250; ++t) {
    std::map<ElemIdx, std::size_t> perLocation;
    for (const auto& a : w.agents()) ++perLocation[a.location];
    std::size_t expected = 0;
    for (const auto& [loc, n] : perLocation) expected += n * (n - 1);
    w.step();
    CHECK(w.summaries().back().observations == expected);
  }
}

TEST_CASE("same scenario and seed give identical runs") {
  sopra::testing::PopulationOptions o;
  o.agents = 12;
  o.seed = 4;
  const auto s = shared(sopra::testing::synthetic_population(o));
  const auto a = run(s, 150, 77);
  const auto b = run(s, 150, 77);
  CHECK(a.events == b.events);
  CHECK(events_csv(*s, a.events) == events_csv(*s, b.events));
  CHECK(metrics_csv(*s, a.metrics) == metrics_csv(*s, b.metrics));
}

TEST_CASE("parallel stepping reproduces the serial reference exactly") {
  for (auto tie : {TieBreak::Lexicographic, TieBreak::Random}) {
    sopra::testing::PopulationOptions o;
    o.agents = 40;
    o.locations = 3;
    o.seed = 8;
    ScenarioData d = sopra::testing::synthetic_population(o);
    d.globals.tieBreak = tie;
    const auto s = shared(d);
    World serial(s, 5), parallel(s, 5);
    for (int t = 0; t < 120; ++t) {
      serial.step(ExecutionPolicy::Serial);
      parallel.step(ExecutionPolicy::Parallel);
    }
    CHECK(serial.events() == parallel.events());
    for (std::size_t i = 0; i < serial.agents().size(); ++i) {
      CHECK(serial.agent(i).habits == parallel.agent(i).habits);
      CHECK(serial.agent(i).exec == parallel.agent(i).exec);
    }
    CHECK(events_csv(*s, serial.events()) == events_csv(*s, parallel.events()));
  }
}

TEST_CASE("decisions depend only on tick-start state") {
  const auto s = std::make_shared<const Scenario>(load_bundled("habit_cascade"));
  World w(s, 1);
  for (int t = 0; t < 150; ++t) {
    std::vector<AgentState> copies = w.agents();
    std::vector<ContextSnapshot> snaps;
    for (std::size_t i = 0; i < copies.size(); ++i) snaps.push_back(w.snapshot_context(i));
    // Reverse order on purpose: no agent's choice can see another's.
    std::vector<ElemIdx> expected(copies.size());
    for (std::size_t k = copies.size(); k-- > 0;) {
      Rng unused(0);
      expected[k] = decision_cycle(copies[k], snaps[k], *s, unused).atomic;
    }
    const auto before = w.events().size();
    w.step();
    for (std::size_t i = 0; i < copies.size(); ++i) CHECK(w.events()[before + i].activity == expected[i]);
  }
}

TEST_CASE("attention is replenished every tick") {
  sopra::testing::PopulationOptions o;
  o.agents = 10;
  o.seed = 2;
  const auto s = shared(sopra::testing::synthetic_population(o));
  World w(s, 1);
  for (int t = 0; t < 30; ++t) {
    w.step();
    for (const auto& a : w.agents()) {
      CHECK(a.attentionalResources == a.attentionBudget);
      CHECK(a.attentionalResources >= 0);
    }
  }
}

TEST_CASE("run with zero ticks and invalid scenarios") {
  const auto s = std::make_shared<const Scenario>(load_bundled("commuting"));
  const auto r = run(s, 0, 1);
  CHECK(r.events.empty());
  CHECK(r.metrics.rows.empty());
  CHECK_THROWS_AS(run(s, -1, 1), std::invalid_argument);

  ScenarioData bad = load_bundled("commuting").data();
  bad.globals.habitThreshold = 2.0;
  CHECK_THROWS_AS(run(shared(bad), 10, 1), InvalidScenario);
}

TEST_CASE("a stable context turns intentional choices into habits") {
  const auto s = std::make_shared<const Scenario>(load_bundled("habit_formation"));
  const auto r = run(s, 500, 7);
  CHECK(first_habitual_tick(r.events) == 7);
  for (const auto& row : r.metrics.rows) {
    if (row.tick < 7) CHECK(row.habitualFraction == 0.0);
    if (row.tick >= 7) CHECK(row.habitualFraction == 1.0);
  }
  for (const auto& e : r.events) CHECK(s->id(e.activity) == "ride bike to work");

  const auto c = std::make_shared<const Scenario>(load_bundled("commuting"));
  const auto rc = run(c, 500, 7);
  CHECK(rc.metrics.rows.front().habitualFraction == 0.0);
  CHECK(rc.metrics.rows.back().habitualFraction > 0.9);
}

TEST_CASE("moving to a new location breaks the habit") {
  const auto s = std::make_shared<const Scenario>(load_bundled("habit_break"));
  const auto r = run(s, 320, 7);
  REQUIRE(r.events.size() == 320);
  CHECK(r.events[299].mode == DecisionMode::Habitual);
  CHECK(r.events[300].mode == DecisionMode::Habitual);
  CHECK(s->id(r.events[300].location) == "Home");
  CHECK(r.events[301].mode == DecisionMode::Intentional);
  CHECK(s->id(r.events[301].location) == "NewHome");
  CHECK(r.events[301].pressure < s->globals().habitThreshold);
}

TEST_CASE("metrics partition the agents every tick") {
  const auto s = std::make_shared<const Scenario>(load_bundled("commuting"));
  const auto r = run(s, 60, 3);
  REQUIRE(r.metrics.rows.size() == 60);
  CHECK(r.metrics.activities == s->atomic_activities());
  for (const auto& row : r.metrics.rows) {
    CHECK(std::accumulate(row.counts.begin(), row.counts.end(), std::int64_t{0}) == 3);
    CHECK(row.habitualFraction >= 0.0);
    CHECK(row.habitualFraction <= 1.0);
  }
  CHECK(collect_metrics(*s, {}).rows.empty());

  std::vector<Event> allHabitual(3);
  for (std::size_t i = 0; i < 3; ++i) {
    allHabitual[i].tick = 4;
    allHabitual[i].agent = i;
    allHabitual[i].activity = s->element("walk to work");
    allHabitual[i].mode = DecisionMode::Habitual;
  }
  const auto table = collect_metrics(*s, allHabitual);
  REQUIRE(table.rows.size() == 1);
  CHECK(table.rows[0].habitualFraction == 1.0);
  CHECK(table.rows[0].meanStrength == 0.0);
}

TEST_CASE("event scores are shares of the candidate total") {
  const auto s = std::make_shared<const Scenario>(load_bundled("habit_formation"));
  const auto r = run(s, 3, 1);
  CHECK(r.events[0].score == doctest::Approx(1.0 / 1.2));
  CHECK(r.events[0].mode == DecisionMode::Intentional);

  const auto napper = shared(lone_napper(1));
  const auto rn = run(napper, 2, 1);
  CHECK(rn.events[0].mode == DecisionMode::Habitual);
  CHECK(rn.events[0].score == 0.0);
}

TEST_CASE("csv layout") {
  const auto s = std::make_shared<const Scenario>(load_bundled("habit_formation"));
  const auto r = run(s, 2, 1);
  const std::string ev = events_csv(*s, r.events);
  CHECK(ev.rfind("tick,agent,activity,mode,pressure,score,location,timepoint\n", 0) == 0);
  CHECK(ev.find("0,bob,ride bike to work,Intentional,0.000000,0.833333,Home,Morning\n") != std::string::npos);
  CHECK(ev.find('\r') == std::string::npos);
  const std::string m = metrics_csv(*s, r.metrics);
  CHECK(m.rfind("tick,habitual_fraction,drive car to work,ride bike to work,take train to work,walk to work,"
                "mean_strength,mean_personal_view,mean_collective_view\n",
                0) == 0);
  CHECK(format_real(0.5) == "0.500000");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("plain") == "plain");
}

}  // TEST_SUITE
