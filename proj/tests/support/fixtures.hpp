#pragma once
// Paths to bundled scenarios and fixtures. SOPRA_SOURCE_DIR is set by the
// build for every test target.

#include <filesystem>
#include <memory>
#include <string>

#include "sopra/model.hpp"
#include "sopra/scenario_io.hpp"

namespace sopra::testing {

inline std::filesystem::path source_path(const std::string& relative) {
  return std::filesystem::path(SOPRA_SOURCE_DIR) / relative;
}

inline std::filesystem::path scenario_path(const std::string& name) {
  return source_path("scenarios/" + name + ".json");
}

inline std::filesystem::path fixture_path(const std::string& name) {
  return source_path("tests/fixtures/" + name + ".json");
}

inline Scenario load_bundled(const std::string& name) {
  return Scenario::build(load_scenario_file(scenario_path(name)));
}

inline std::shared_ptr<const Scenario> shared(ScenarioData d) {
  return std::make_shared<const Scenario>(Scenario::build(std::move(d)));
}

}  // namespace sopra::testing
