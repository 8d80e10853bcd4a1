#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "sopra/learning.hpp"

using namespace sopra;
using sopra::testing::load_bundled;

namespace {

struct Bench {
  Scenario s = load_bundled("habit_formation");
  ElemIdx bike = s.element("ride bike to work");
  ElemIdx car = s.element("drive car to work");
  ElemIdx home = s.element("Home");
  ElemIdx morning = s.element("Morning");
  ContextSnapshot ctx = ContextSnapshot::of({home, morning});
};

// One tick of perform-and-update for a lone agent in a fixed context.
void perform(AgentState& agent, ElemIdx activity, const ContextSnapshot& ctx, const Globals& g) {
  ReinforcedSet reinforced;
  reinforce_habit(agent, activity, ctx, reinforced);
  decay_habits(agent, reinforced, g);
}

}  // namespace

TEST_SUITE("learning") {

TEST_CASE("reinforcement saturates toward one") {
  Bench b;
  AgentState agent;
  agent.habitRate = 0.1;
  ReinforcedSet reinforced;
  reinforce_habit(agent, b.bike, b.ctx, reinforced);
  CHECK(agent.habit(b.bike, b.home)->strength == doctest::Approx(0.1));
  CHECK(agent.habit(b.bike, b.morning)->strength == doctest::Approx(0.1));
  CHECK(agent.habit(b.car, b.home) == nullptr);
  CHECK(reinforced.size() == 2);
  CHECK(reinforced.at({b.bike, b.home}) == 0.0);

  agent.habitRate = 0.2;
  agent.habits[{b.car, b.home}] = ViewTriple{0.5, 0, std::nullopt};
  agent.habits[{b.car, b.morning}] = ViewTriple{1.0, 0, std::nullopt};
  reinforce_habit(agent, b.car, b.ctx, reinforced);
  CHECK(agent.habit(b.car, b.home)->strength == doctest::Approx(0.6));
  CHECK(agent.habit(b.car, b.morning)->strength == 1.0);

  // A second reinforcement in the same tick keeps the first pre-update value.
  reinforce_habit(agent, b.car, b.ctx, reinforced);
  CHECK(reinforced.at({b.car, b.home}) == 0.5);
}

TEST_CASE("default decay skips reinforced pairs") {
  Bench b;
  Globals g;
  g.decayRate = 0.025;
  AgentState agent;
  agent.habits[{b.car, b.home}] = ViewTriple{0.8, 0, std::nullopt};
  agent.habits[{b.bike, b.home}] = ViewTriple{0.4, 0, std::nullopt};
  ReinforcedSet reinforced{{{b.bike, b.home}, 0.4}};
  decay_habits(agent, reinforced, g);
  CHECK(agent.habit(b.car, b.home)->strength == doctest::Approx(0.78));
  CHECK(agent.habit(b.bike, b.home)->strength == 0.4);

  g.decayRate = 0.0;
  decay_habits(agent, {}, g);
  CHECK(agent.habit(b.car, b.home)->strength == doctest::Approx(0.78));
}

TEST_CASE("decayAll applies to reinforced pairs from their old strength") {
  Bench b;
  Globals g;
  g.decayRate = 0.05;
  g.decayMode = DecayMode::DecayAll;
  AgentState agent;
  agent.habitRate = 0.2;
  agent.habits[{b.bike, b.home}] = ViewTriple{0.4, 0, std::nullopt};
  ReinforcedSet reinforced;
  reinforce_habit(agent, b.bike, ContextSnapshot::of({b.home}), reinforced);
  decay_habits(agent, reinforced, g);
  CHECK(agent.habit(b.bike, b.home)->strength == doctest::Approx((1 - 0.05) * 0.4 + 0.2 * (1 - 0.4)));
}

TEST_CASE("equilibrium strengths") {
  CHECK(equilibrium_strength(0.1, 0.025, DecayMode::DecayAll) == doctest::Approx(0.8));
  CHECK(equilibrium_strength(0.1, 0.0, DecayMode::DecayAll) == 1.0);
  CHECK(equilibrium_strength(0.3, 0.3, DecayMode::DecayAll) == doctest::Approx(0.5));
  CHECK(equilibrium_strength(0.1, 0.025, DecayMode::Default) == 1.0);
  CHECK_THROWS_AS(equilibrium_strength(0.0, 0.1, DecayMode::DecayAll), std::invalid_argument);
  CHECK_THROWS_AS(equilibrium_strength(0.1, 1.0, DecayMode::DecayAll), std::invalid_argument);
  CHECK_THROWS_AS(equilibrium_strength(1.5, 0.1, DecayMode::Default), std::invalid_argument);
}

TEST_CASE("repeated performance converges monotonically") {
  Bench b;
  const auto ctx = ContextSnapshot::of({b.home});
  for (double r : {0.01, 0.05, 0.2, 0.9}) {
    for (double d : {0.01, 0.03, 0.3}) {
      for (auto mode : {DecayMode::Default, DecayMode::DecayAll}) {
        Globals g;
        g.decayRate = d;
        g.decayMode = mode;
        AgentState agent;
        agent.habitRate = r;
        const double target = equilibrium_strength(r, d, mode);
        // h' = r + (1 - r - d) h overshoots when r + d > 1; it still converges.
        const bool monotone = mode == DecayMode::Default || r + d <= 1.0;
        double prev = 0.0;
        for (int t = 1; t <= 2000; ++t) {
          perform(agent, b.bike, ctx, g);
          const double h = agent.habit(b.bike, b.home)->strength;
          if (monotone) CHECK(h >= prev - 1e-15);
          if (mode == DecayMode::DecayAll) {
            CHECK(std::abs(h - target) <= std::pow(1 - std::min(r, d), t) + 1e-12);
          }
          prev = h;
        }
        CAPTURE(r);
        CAPTURE(d);
        CHECK(std::abs(prev - target) < 1e-6);
      }
    }
  }
}

TEST_CASE("a faster learner stays strictly ahead") {
  Bench b;
  const auto ctx = ContextSnapshot::of({b.home});
  for (auto mode : {DecayMode::Default, DecayMode::DecayAll}) {
    Globals g;
    g.decayRate = 0.05;
    g.decayMode = mode;
    AgentState fast, slow;
    fast.habitRate = 0.2;
    slow.habitRate = 0.05;
    for (int t = 1; t <= 500; ++t) {
      perform(fast, b.bike, ctx, g);
      perform(slow, b.bike, ctx, g);
      if (fast.habit(b.bike, b.home)->strength <= slow.habit(b.bike, b.home)->strength) {
        FAIL("ordering broken at tick " << t);
      }
    }
  }
}

TEST_CASE("self-awareness lags the implicit strength") {
  Bench b;
  Globals g;
  g.awarenessRate = 0.5;
  AgentState agent;
  agent.habits[{b.car, b.home}] = ViewTriple{0.8, 0.0, std::nullopt};
  agent.habits[{b.bike, b.home}] = ViewTriple{0.3, 0.3, std::nullopt};
  update_personal_view(agent, g);
  CHECK(agent.habit(b.car, b.home)->personalView == doctest::Approx(0.4));
  CHECK(agent.habit(b.bike, b.home)->personalView == 0.3);

  g.awarenessRate = 1.0;
  update_personal_view(agent, g);
  CHECK(agent.habit(b.car, b.home)->personalView == doctest::Approx(0.8));

  g.awarenessRate = 0.3;
  agent.habits[{b.car, b.home}].personalView = 0.1;
  double gap = 0.7;
  for (int i = 0; i < 10; ++i) {
    update_personal_view(agent, g);
    const double now = std::abs(agent.habit(b.car, b.home)->personalView - 0.8);
    CHECK(now == doctest::Approx(gap * 0.7));
    gap = now;
  }
}

TEST_CASE("observation pulls performed activities up and alternatives down") {
  Bench b;
  Globals g;
  g.socialLearningRate = 0.3;
  AgentState observer;
  observer.slot = 1;
  observer.location = b.home;
  observer.habits[{b.car, b.home}] = ViewTriple{0.5, 0.5, 0.5};

  ObservationEvent ev;
  ev.observer = 1;
  ev.actor = 0;
  ev.location = b.home;
  ev.performed = {b.bike};
  ev.alternatives = {b.car, b.s.element("walk to work")};
  ev.context = ContextSnapshot::of({b.home});
  observe(observer, ev, g);
  CHECK(observer.habit(b.bike, b.home)->collective() == doctest::Approx(0.3));
  CHECK(observer.habit(b.bike, b.home)->strength == 0.0);
  CHECK(observer.habit(b.car, b.home)->collective() == doctest::Approx(0.35));
  CHECK(observer.habit(b.car, b.home)->strength == 0.5);
  CHECK(observer.habit(b.s.element("walk to work"), b.home) == nullptr);
}

TEST_CASE("observation requires two co-located agents") {
  Bench b;
  Globals g;
  AgentState observer;
  observer.slot = 0;
  observer.location = b.home;
  ObservationEvent ev;
  ev.observer = 0;
  ev.actor = 0;
  ev.location = b.home;
  CHECK_THROWS_AS(observe(observer, ev, g), std::invalid_argument);
  ev.actor = 1;
  ev.location = b.s.element("Morning");
  CHECK_THROWS_AS(observe(observer, ev, g), std::invalid_argument);
  ev.location = b.home;
  ev.observer = 2;
  CHECK_THROWS_AS(observe(observer, ev, g), std::invalid_argument);
}

TEST_CASE("collective views approach one under constant observation") {
  Bench b;
  Globals g;
  g.socialLearningRate = 0.3;
  AgentState observer;
  observer.slot = 1;
  observer.location = b.home;
  ObservationEvent ev;
  ev.observer = 1;
  ev.location = b.home;
  ev.performed = {b.bike};
  ev.context = ContextSnapshot::of({b.home});
  const int bound = static_cast<int>(std::ceil(std::log(0.01) / std::log(1 - 0.3)));
  CHECK(bound == 13);
  for (int t = 0; t < bound; ++t) observe(observer, ev, g);
  CHECK(observer.habit(b.bike, b.home)->collective() > 0.99);
}

TEST_CASE("updates keep every view component in range") {
  Bench b;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<ElemIdx> acts{b.bike, b.car};
  const std::vector<ElemIdx> elems{b.home, b.morning};
  for (int seq = 0; seq < 500; ++seq) {
    Globals g;
    g.decayRate = u(rng) * 0.999;
    g.awarenessRate = u(rng);
    g.socialLearningRate = u(rng);
    g.decayMode = u(rng) < 0.5 ? DecayMode::Default : DecayMode::DecayAll;
    AgentState agent;
    agent.habitRate = 1e-9 + u(rng) * (1 - 1e-9);
    for (int op = 0; op < 40; ++op) {
      const ElemIdx a = acts[rng() % 2];
      switch (rng() % 3) {
        case 0: perform(agent, a, ContextSnapshot::of({elems[rng() % 2]}), g); break;
        case 1: update_personal_view(agent, g); break;
        default: {
          ObservationEvent ev;
          ev.observer = 0;
          ev.actor = 1;
          ev.location = agent.location;
          ev.performed = {a};
          ev.alternatives = {a == b.bike ? b.car : b.bike};
          ev.context = ContextSnapshot::of(elems);
          observe(agent, ev, g);
        }
      }
      for (const auto& [k, v] : agent.habits) {
        REQUIRE(v.in_unit_range());
      }
    }
  }
}

}  // TEST_SUITE
