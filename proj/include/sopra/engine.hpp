#pragma once
// Deterministic discrete-time scheduler.
//
// One tick:
//   1. snapshot every agent's context from tick-start state
//   2. each agent runs its decision cycle
//   3. reinforce / decay / awareness updates per agent
//   4. every agent observes every co-located actor
//   5. replenish attention, apply scripted moves, append events, tick + 1
//
// Phases 1-4 touch only the acting agent's own state (phase 4 reads the other
// agents' tick records, which are fixed by then), so they run either serially
// or as OpenMP loops over agents with bit-identical results. The serial path
// is the reference the parallel path is tested against.

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sopra/cognition.hpp"
#include "sopra/model.hpp"
#include "sopra/state.hpp"
#include "sopra/validate.hpp"

namespace sopra {

enum class ExecutionPolicy { Serial, Parallel };

struct Event {
  std::int64_t tick = 0;
  std::size_t agent = 0;  // slot
  ElemIdx activity{};
  DecisionMode mode = DecisionMode::Habitual;
  double pressure = 0.0;
  // Chosen activity's share of the summed intentional scores of its final
  // candidate set (0 when all scores are 0). Invariant under rescaling of
  // value priorities.
  double score = 0.0;
  ElemIdx location{};
  std::optional<ElemIdx> timepoint;
  bool operator==(const Event&) const = default;
};

// Connection-store aggregates at the end of a tick.
struct TickSummary {
  std::int64_t tick = 0;
  double meanStrength = 0.0;
  double meanPersonalView = 0.0;
  double meanCollectiveView = 0.0;
  std::size_t observations = 0;
};

class InvalidScenario : public std::runtime_error {
 public:
  explicit InvalidScenario(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

class World {
 public:
  // Initial world: agents loaded from the scenario, collective views projected
  // from personal views, one generator stream per agent derived from `seed`.
  World(std::shared_ptr<const Scenario> scenario, std::uint64_t seed);

  const Scenario& scenario() const { return *scenario_; }
  std::int64_t tick() const { return tick_; }
  const std::vector<AgentState>& agents() const { return agents_; }
  const AgentState& agent(std::size_t slot) const { return agents_.at(slot); }
  const std::vector<Event>& events() const { return events_; }
  const std::vector<TickSummary>& summaries() const { return summaries_; }
  // Decision traces of the most recent tick, by slot.
  const std::vector<DecisionTrace>& last_traces() const { return lastTraces_; }

  ContextSnapshot snapshot_context(std::size_t slot) const;

  void step(ExecutionPolicy policy = ExecutionPolicy::Serial);

 private:
  std::shared_ptr<const Scenario> scenario_;
  std::vector<AgentState> agents_;
  std::vector<Rng> rngs_;
  std::int64_t tick_ = 0;
  std::vector<Event> events_;
  std::vector<TickSummary> summaries_;
  std::vector<DecisionTrace> lastTraces_;
};

struct MetricsRow {
  std::int64_t tick = 0;
  double habitualFraction = 0.0;
  std::vector<std::int64_t> counts;  // aligned with MetricsTable::activities
  double meanStrength = 0.0;
  double meanPersonalView = 0.0;
  double meanCollectiveView = 0.0;
  bool operator==(const MetricsRow&) const = default;
};

struct MetricsTable {
  std::vector<ElemIdx> activities;  // atomic activities, ascending id
  std::vector<MetricsRow> rows;
};

// One row per tick present in the log. Strength means come from the matching
// TickSummary (0 when none was recorded).
MetricsTable collect_metrics(const Scenario& s, const std::vector<Event>& log,
                             const std::vector<TickSummary>& summaries = {});

struct RunResult {
  std::vector<Event> events;
  std::vector<TickSummary> summaries;
  MetricsTable metrics;
};

// Validates, then steps a fresh World `ticks` times. Throws InvalidScenario
// before tick 0 when validation fails.
RunResult run(std::shared_ptr<const Scenario> scenario, std::int64_t ticks, std::uint64_t seed,
              ExecutionPolicy policy = ExecutionPolicy::Serial);

}  // namespace sopra
