#include "sopra/engine.hpp"

#include <algorithm>
#include <exception>
#include <map>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sopra/hierarchy.hpp"
#include "sopra/learning.hpp"

namespace sopra {

InvalidScenario::InvalidScenario(ValidationReport report)
    : std::runtime_error("scenario is not valid: " +
                         (report.violations.empty() ? std::string("?") : report.lines().front())),
      report_(std::move(report)) {}

namespace {

// Runs f(i) for i in [0, n). Exceptions thrown inside the OpenMP region are
// captured and the first one is rethrown on the calling thread.
template <typename F>
void for_each_agent(std::size_t n, ExecutionPolicy policy, F&& f) {
  if (policy == ExecutionPolicy::Parallel) {
#ifdef _OPENMP
    std::exception_ptr failure;
    std::mutex failureMutex;
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < count; ++i) {
      try {
        f(static_cast<std::size_t>(i));
      } catch (...) {
        std::lock_guard<std::mutex> lock(failureMutex);
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
    return;
#endif
  }
  for (std::size_t i = 0; i < n; ++i) f(i);
}

ContextSnapshot make_snapshot(const Scenario& s, const AgentState& agent, std::int64_t tick,
                              const std::vector<std::size_t>& coLocated, const std::vector<AgentState>& all) {
  std::vector<ElemIdx> present{agent.location};
  if (auto tp = s.timepoint_at(tick)) present.push_back(*tp);
  for (const auto other : coLocated) {
    if (other != agent.slot) present.push_back(all[other].self);
  }
  const auto& resources = s.resources_at(agent.location);
  present.insert(present.end(), resources.begin(), resources.end());
  if (agent.lastActivity) present.push_back(*agent.lastActivity);
  return ContextSnapshot::of(std::move(present));
}

// Slots grouped by current location, ascending within each group.
std::map<ElemIdx, std::vector<std::size_t>> group_by_location(const std::vector<AgentState>& agents) {
  std::map<ElemIdx, std::vector<std::size_t>> groups;
  for (const auto& a : agents) groups[a.location].push_back(a.slot);
  return groups;
}

struct ActorRecord {
  std::vector<ElemIdx> performed;
  std::vector<ElemIdx> alternatives;
};

ActorRecord actor_record(const CycleResult& r) {
  ActorRecord rec;
  if (r.trace.steps.empty()) rec.performed.push_back(r.atomic);
  for (const auto& step : r.trace.steps) rec.performed.push_back(step.chosen);
  std::sort(rec.performed.begin(), rec.performed.end());
  for (const auto& step : r.trace.steps) {
    for (const auto c : step.candidates) {
      if (!std::binary_search(rec.performed.begin(), rec.performed.end(), c)) rec.alternatives.push_back(c);
    }
  }
  std::sort(rec.alternatives.begin(), rec.alternatives.end());
  rec.alternatives.erase(std::unique(rec.alternatives.begin(), rec.alternatives.end()), rec.alternatives.end());
  return rec;
}

struct StoreSums {
  double strength = 0.0;
  double personal = 0.0;
  double collective = 0.0;
  std::size_t count = 0;
};

StoreSums store_sums(const AgentState& a) {
  StoreSums s;
  for (const auto& [key, c] : a.habits) {
    s.strength += c.strength;
    s.personal += c.personalView;
    s.collective += c.collective();
    ++s.count;
  }
  return s;
}

}  // namespace

World::World(std::shared_ptr<const Scenario> scenario, std::uint64_t seed) : scenario_(std::move(scenario)) {
  const Scenario& s = *scenario_;
  agents_.reserve(s.agents().size());
  rngs_.reserve(s.agents().size());
  for (std::size_t slot = 0; slot < s.agents().size(); ++slot) {
    agents_.push_back(initial_agent_state(s, slot));
    project_collective_from_personal(agents_.back());
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(slot)};
    rngs_.emplace_back(seq);
  }
  lastTraces_.resize(agents_.size());
}

ContextSnapshot World::snapshot_context(std::size_t slot) const {
  const AgentState& agent = agents_.at(slot);
  std::vector<std::size_t> coLocated;
  for (const auto& other : agents_) {
    if (other.location == agent.location) coLocated.push_back(other.slot);
  }
  return make_snapshot(*scenario_, agent, tick_, coLocated, agents_);
}

void World::step(ExecutionPolicy policy) {
  const Scenario& s = *scenario_;
  const Globals& g = s.globals();
  const std::size_t n = agents_.size();
  const auto groups = group_by_location(agents_);

  // 1. snapshots on tick-start state
  std::vector<ContextSnapshot> snapshots(n);
  for_each_agent(n, policy, [&](std::size_t i) {
    snapshots[i] = make_snapshot(s, agents_[i], tick_, groups.at(agents_[i].location), agents_);
  });

  // 2. decisions
  std::vector<CycleResult> results(n);
  std::vector<double> atomicPressure(n, 0.0);
  for_each_agent(n, policy, [&](std::size_t i) {
    results[i] = decision_cycle(agents_[i], snapshots[i], s, rngs_[i]);
    if (results[i].trace.steps.empty()) {
      atomicPressure[i] = habitual_pressure(agents_[i], results[i].atomic, snapshots[i], s);
    }
  });

  std::vector<ActorRecord> records(n);
  // 3. individual learning
  for_each_agent(n, policy, [&](std::size_t i) {
    records[i] = actor_record(results[i]);
    ReinforcedSet reinforced;
    for (const auto a : records[i].performed) reinforce_habit(agents_[i], a, snapshots[i], reinforced);
    decay_habits(agents_[i], reinforced, g);
    update_personal_view(agents_[i], g);
  });

  // 4. social learning: observer i watches every co-located actor j, ascending j
  std::vector<std::size_t> observed(n, 0);
  for_each_agent(n, policy, [&](std::size_t i) {
    for (const auto j : groups.at(agents_[i].location)) {
      if (j == i) continue;
      ObservationEvent ev;
      ev.observer = i;
      ev.actor = j;
      ev.location = agents_[j].location;
      ev.performed = records[j].performed;
      ev.alternatives = records[j].alternatives;
      ev.context = snapshots[j];
      ev.tick = tick_;
      observe(agents_[i], ev, g);
      ++observed[i];
    }
  });

  // 5. bookkeeping (serial, slot order)
  const auto timepoint = s.timepoint_at(tick_);
  for (std::size_t i = 0; i < n; ++i) {
    AgentState& a = agents_[i];
    const CycleResult& r = results[i];
    Event ev;
    ev.tick = tick_;
    ev.agent = i;
    ev.activity = r.atomic;
    if (r.trace.steps.empty()) {
      ev.mode = DecisionMode::Habitual;
      ev.pressure = atomicPressure[i];
    } else {
      const DecisionStep& last = r.trace.steps.back();
      ev.mode = last.mode;
      ev.pressure = last.pressure;
      ev.score = last.scoreTotal > 0.0 ? last.score / last.scoreTotal : 0.0;
    }
    ev.location = a.location;
    ev.timepoint = timepoint;
    events_.push_back(ev);

    a.lastActivity = r.atomic;
    a.attentionalResources = a.attentionBudget;
    lastTraces_[i] = std::move(results[i].trace);
  }
  for (const auto& [slot, location] : s.moves_at(tick_)) agents_[slot].location = location;

  std::vector<StoreSums> sums(n);
  for_each_agent(n, policy, [&](std::size_t i) { sums[i] = store_sums(agents_[i]); });
  StoreSums total;
  std::size_t observations = 0;
  for (std::size_t i = 0; i < n; ++i) {
    total.strength += sums[i].strength;
    total.personal += sums[i].personal;
    total.collective += sums[i].collective;
    total.count += sums[i].count;
    observations += observed[i];
  }
  TickSummary summary;
  summary.tick = tick_;
  summary.observations = observations;
  if (total.count > 0) {
    const auto c = static_cast<double>(total.count);
    summary.meanStrength = total.strength / c;
    summary.meanPersonalView = total.personal / c;
    summary.meanCollectiveView = total.collective / c;
  }
  summaries_.push_back(summary);
  ++tick_;
}

MetricsTable collect_metrics(const Scenario& s, const std::vector<Event>& log, const std::vector<TickSummary>& summaries) {
  MetricsTable table;
  table.activities = s.atomic_activities();
  std::map<ElemIdx, std::size_t> column;
  for (std::size_t i = 0; i < table.activities.size(); ++i) column[table.activities[i]] = i;
  std::map<std::int64_t, const TickSummary*> byTick;
  for (const auto& summary : summaries) byTick[summary.tick] = &summary;

  std::size_t habitual = 0;
  std::size_t total = 0;
  auto flush = [&]() {
    MetricsRow& row = table.rows.back();
    row.habitualFraction = total ? static_cast<double>(habitual) / static_cast<double>(total) : 0.0;
    if (auto it = byTick.find(row.tick); it != byTick.end()) {
      row.meanStrength = it->second->meanStrength;
      row.meanPersonalView = it->second->meanPersonalView;
      row.meanCollectiveView = it->second->meanCollectiveView;
    }
  };
  for (const auto& ev : log) {
    if (table.rows.empty() || table.rows.back().tick != ev.tick) {
      if (!table.rows.empty()) flush();
      table.rows.push_back(MetricsRow{ev.tick, 0.0, std::vector<std::int64_t>(table.activities.size(), 0)});
      habitual = total = 0;
    }
    ++total;
    if (ev.mode == DecisionMode::Habitual) ++habitual;
    if (auto it = column.find(ev.activity); it != column.end()) ++table.rows.back().counts[it->second];
  }
  if (!table.rows.empty()) flush();
  return table;
}

RunResult run(std::shared_ptr<const Scenario> scenario, std::int64_t ticks, std::uint64_t seed, ExecutionPolicy policy) {
  if (ticks < 0) throw std::invalid_argument("ticks must be >= 0");
  auto report = validate_scenario(*scenario);
  if (!report.ok()) throw InvalidScenario(std::move(report));
  World world(scenario, seed);
  for (std::int64_t t = 0; t < ticks; ++t) world.step(policy);
  RunResult result;
  result.events = world.events();
  result.summaries = world.summaries();
  result.metrics = collect_metrics(*scenario, result.events, result.summaries);
  return result;
}

}  // namespace sopra
