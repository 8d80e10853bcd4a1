#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "sopra/csv_export.hpp"
#include "sopra/engine.hpp"
#include "sopra/hierarchy.hpp"
#include "sopra/scenario_io.hpp"
#include "sopra/validate.hpp"

namespace sopra::cli {

namespace fs = std::filesystem;

namespace {

// Carries an exit code out of a subcommand.
struct Exit {
  int code;
};

std::pair<std::string, std::string> split_assignment(const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) throw std::invalid_argument("expected key=value, got '" + kv + "'");
  return {kv.substr(0, eq), kv.substr(eq + 1)};
}

ScenarioData load(const std::string& path, std::ostream& err) {
  try {
    return load_scenario_file(path);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const ParseError& e) {
    err << "error: " << path << ": " << e.what() << "\n";
  }
  throw Exit{kUsageError};
}

void apply_overrides(ScenarioData& data, const std::vector<std::string>& overrides, std::ostream& err) {
  for (const auto& kv : overrides) {
    try {
      auto [key, value] = split_assignment(kv);
      apply_override(data.globals, key, value);
    } catch (const std::invalid_argument& e) {
      err << "error: --override " << kv << ": " << e.what() << "\n";
      throw Exit{kUsageError};
    }
  }
}

std::shared_ptr<const Scenario> resolve_valid(ScenarioData data, std::ostream& out, std::ostream& err) {
  auto report = validate_document(data);
  if (!report.ok()) {
    for (const auto& line : report.lines()) out << line << "\n";
    err << "error: scenario is not valid (" << report.violations.size() << " violation(s))\n";
    throw Exit{kInvalid};
  }
  try {
    return std::make_shared<const Scenario>(Scenario::build(std::move(data)));
  } catch (const BuildError& e) {
    for (const auto& p : e.problems()) out << p << "\n";
    throw Exit{kInvalid};
  }
}

bool outputs_present(const fs::path& dir) {
  std::error_code ec;
  return fs::exists(dir / "events.csv", ec) || fs::exists(dir / "metrics.csv", ec);
}

void prepare_out_dir(const fs::path& dir, bool force, std::ostream& err) {
  if (outputs_present(dir) && !force) {
    err << "error: " << dir.string() << " already holds run outputs; pass --force to overwrite\n";
    throw Exit{kUsageError};
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    err << "error: cannot create " << dir.string() << ": " << ec.message() << "\n";
    throw Exit{kUsageError};
  }
}

void write_outputs(const fs::path& dir, const Scenario& s, const RunResult& r) {
  write_file_atomically(dir / "events.csv", events_csv(s, r.events));
  write_file_atomically(dir / "metrics.csv", metrics_csv(s, r.metrics));
}

double final_habitual_fraction(const RunResult& r) {
  return r.metrics.rows.empty() ? 0.0 : r.metrics.rows.back().habitualFraction;
}

struct RunOptions {
  std::string scenario;
  std::int64_t ticks = 0;
  std::uint64_t seed = 0;
  std::string out = "./out";
  std::vector<std::string> overrides;
  bool force = false;
  bool parallel = false;
};

int do_validate(const std::string& path, std::ostream& out, std::ostream& err) {
  const ScenarioData data = load(path, err);
  const auto report = validate_document(data);
  if (report.ok()) {
    out << "OK\n";
    return kOk;
  }
  for (const auto& line : report.lines()) out << line << "\n";
  return kInvalid;
}

int do_run(const RunOptions& o, std::ostream& out, std::ostream& err) {
  ScenarioData data = load(o.scenario, err);
  apply_overrides(data, o.overrides, err);
  auto scenario = resolve_valid(std::move(data), out, err);
  const fs::path dir(o.out);
  prepare_out_dir(dir, o.force, err);
  const auto result = run(scenario, o.ticks, o.seed, o.parallel ? ExecutionPolicy::Parallel : ExecutionPolicy::Serial);
  try {
    write_outputs(dir, *scenario, result);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  out << "ticks=" << o.ticks << " agents=" << scenario->agents().size()
      << " habitual_fraction=" << format_real(final_habitual_fraction(result)) << "\n";
  return kOk;
}

struct InferOptions {
  std::string scenario;
  std::string op;
  std::string activity;
  std::string value;
  std::string agent;
};

int do_infer(const InferOptions& o, std::ostream& out, std::ostream& err) {
  auto scenario = resolve_valid(load(o.scenario, err), out, err);
  const Scenario& s = *scenario;
  auto activity = s.find_element(o.activity);
  if (!activity || !s.is_activity(*activity)) {
    err << "error: unknown activity '" << o.activity << "'\n";
    return kUsageError;
  }
  if (o.op == "leaves") {
    for (const auto leaf : atomic_leaves(*activity, s)) out << s.id(leaf) << "\n";
    return kOk;
  }

  // propagate
  if (o.agent.empty()) {
    err << "error: --op propagate needs --agent\n";
    return kUsageError;
  }
  std::size_t slot = 0;
  try {
    slot = s.agent_slot(o.agent);
  } catch (const UnknownId&) {
    err << "error: unknown agent '" << o.agent << "'\n";
    return kUsageError;
  }
  std::vector<ValueIdx> values;
  if (!o.value.empty()) {
    auto v = s.find_value(o.value);
    if (!v) {
      err << "error: unknown value '" << o.value << "'\n";
      return kUsageError;
    }
    values.push_back(*v);
  } else {
    for (std::size_t i = 0; i < s.value_count(); ++i) values.push_back(ValueIdx{static_cast<std::int32_t>(i)});
  }
  const AgentState agent = initial_agent_state(s, slot);
  std::vector<ElemIdx> nodes{*activity};
  for (const auto d : descendants(*activity, std::nullopt, s)) nodes.push_back(d);
  for (const auto node : nodes) {
    for (const auto v : values) {
      out << s.id(node) << "\t" << s.id(v) << "\t" << format_real(propagate_value_connection(agent, v, node, s))
          << "\n";
    }
  }
  return kOk;
}

struct SweepOptions {
  std::string scenario;
  std::int64_t ticks = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> grid;  // key=v1,v2,...
  std::string out = "./out";
  bool force = false;
  bool parallel = false;
};

int do_sweep(const SweepOptions& o, std::ostream& out, std::ostream& err) {
  const ScenarioData base = load(o.scenario, err);

  // Cartesian product of the grid axes.
  std::vector<std::pair<std::string, std::vector<std::string>>> axes;
  for (const auto& setting : o.grid) {
    try {
      auto [key, list] = split_assignment(setting);
      std::vector<std::string> levels;
      std::stringstream ss(list);
      for (std::string item; std::getline(ss, item, ',');) levels.push_back(item);
      if (levels.empty()) throw std::invalid_argument("no levels for '" + key + "'");
      axes.emplace_back(key, std::move(levels));
    } catch (const std::invalid_argument& e) {
      err << "error: --set " << setting << ": " << e.what() << "\n";
      return kUsageError;
    }
  }
  std::vector<std::vector<std::string>> combos{{}};
  for (const auto& [key, levels] : axes) {
    std::vector<std::vector<std::string>> next;
    for (const auto& c : combos) {
      for (const auto& level : levels) {
        auto extended = c;
        extended.push_back(key + "=" + level);
        next.push_back(std::move(extended));
      }
    }
    combos = std::move(next);
  }

  struct Job {
    std::shared_ptr<const Scenario> scenario;
    std::vector<std::string> overrides;
    std::uint64_t seed;
    fs::path dir;
    RunResult result;
  };
  std::vector<Job> jobs;
  const fs::path root(o.out);
  if (fs::exists(root / "sweep.csv") && !o.force) {
    err << "error: " << root.string() << " already holds sweep outputs; pass --force to overwrite\n";
    return kUsageError;
  }
  for (const auto& combo : combos) {
    ScenarioData data = base;
    apply_overrides(data, combo, err);
    auto scenario = resolve_valid(std::move(data), out, err);
    for (const auto seed : o.seeds) {
      char name[32];
      std::snprintf(name, sizeof name, "run_%04zu", jobs.size());
      jobs.push_back(Job{scenario, combo, seed, root / name, {}});
    }
  }
  for (const auto& job : jobs) prepare_out_dir(job.dir, o.force, err);

  // Worlds are independent; each job owns its result.
  const auto count = static_cast<std::int64_t>(jobs.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) if (o.parallel)
#endif
  for (std::int64_t i = 0; i < count; ++i) {
    auto& job = jobs[static_cast<std::size_t>(i)];
    job.result = run(job.scenario, o.ticks, job.seed);
  }

  std::string summary = "run,seed";
  for (const auto& [key, levels] : axes) summary += "," + csv_field(key);
  summary += ",final_habitual_fraction,final_mean_strength\n";
  try {
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      const Job& job = jobs[i];
      write_outputs(job.dir, *job.scenario, job.result);
      summary += job.dir.filename().string() + "," + std::to_string(job.seed);
      for (const auto& kv : job.overrides) summary += "," + csv_field(kv.substr(kv.find('=') + 1));
      const auto& rows = job.result.metrics.rows;
      summary += "," + format_real(final_habitual_fraction(job.result));
      summary += "," + format_real(rows.empty() ? 0.0 : rows.back().meanStrength) + "\n";
    }
    write_file_atomically(root / "sweep.csv", summary);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  out << "runs=" << jobs.size() << " ticks=" << o.ticks << " out=" << root.string() << "\n";
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Social practice agent simulator", "sopra"};
  app.require_subcommand(1);

  std::string validatePath;
  auto* validate = app.add_subcommand("validate", "Check a scenario file for structural violations");
  validate->add_option("scenario,--scenario", validatePath, "Scenario JSON file")->required();

  RunOptions runOpts;
  auto* runCmd = app.add_subcommand("run", "Simulate a scenario and write events.csv and metrics.csv");
  runCmd->add_option("--scenario", runOpts.scenario, "Scenario JSON file")->required();
  runCmd->add_option("--ticks", runOpts.ticks, "Number of ticks")->required()->check(CLI::NonNegativeNumber);
  runCmd->add_option("--seed", runOpts.seed, "Random seed")->required();
  runCmd->add_option("--out", runOpts.out, "Output directory")->capture_default_str();
  runCmd->add_option("--override", runOpts.overrides, "Override a global, key=value (repeatable)");
  runCmd->add_flag("--force", runOpts.force, "Overwrite existing outputs");
  runCmd->add_flag("--parallel", runOpts.parallel, "Step agents with OpenMP");

  InferOptions inferOpts;
  auto* infer = app.add_subcommand("infer", "Query the activity hierarchy");
  infer->add_option("--scenario", inferOpts.scenario, "Scenario JSON file")->required();
  infer->add_option("--op", inferOpts.op, "leaves | propagate")->required()->check(CLI::IsMember({"leaves", "propagate"}));
  infer->add_option("--activity", inferOpts.activity, "Activity id")->required();
  infer->add_option("--value", inferOpts.value, "Value id (propagate; default: all values)");
  infer->add_option("--agent", inferOpts.agent, "Agent id (propagate)");

  SweepOptions sweepOpts;
  auto* sweep = app.add_subcommand("sweep", "Run a grid of overrides x seeds");
  sweep->add_option("--scenario", sweepOpts.scenario, "Scenario JSON file")->required();
  sweep->add_option("--ticks", sweepOpts.ticks, "Number of ticks")->required()->check(CLI::NonNegativeNumber);
  sweep->add_option("--seeds", sweepOpts.seeds, "Seeds (comma separated)")->required()->delimiter(',');
  sweep->add_option("--set", sweepOpts.grid, "Grid axis key=v1,v2,... (repeatable)");
  sweep->add_option("--out", sweepOpts.out, "Output directory")->capture_default_str();
  sweep->add_flag("--force", sweepOpts.force, "Overwrite existing outputs");
  sweep->add_flag("--parallel", sweepOpts.parallel, "Run worlds concurrently with OpenMP");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    if (validate->parsed()) return do_validate(validatePath, out, err);
    if (runCmd->parsed()) return do_run(runOpts, out, err);
    if (infer->parsed()) return do_infer(inferOpts, out, err);
    if (sweep->parsed()) return do_sweep(sweepOpts, out, err);
  } catch (const Exit& e) {
    return e.code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace sopra::cli
