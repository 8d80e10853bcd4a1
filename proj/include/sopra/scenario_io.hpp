#pragma once
// Scenario file format (JSON) <-> ScenarioData.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sopra/model.hpp"

namespace sopra {

// Malformed document: bad JSON, wrong field type, unknown key or enum label.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable file.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ScenarioData parse_scenario(const nlohmann::json& doc);
ScenarioData parse_scenario_text(std::string_view text);
ScenarioData load_scenario_file(const std::filesystem::path& path);

nlohmann::json to_json(const ScenarioData& data);
std::string serialize_scenario(const ScenarioData& data);

// parse + resolve.
Scenario build_scenario(const nlohmann::json& doc);
Scenario build_scenario(std::string_view text);

// Names accepted by apply_override, in a fixed order.
const std::vector<std::string>& global_names();

// Sets one global from its textual form ("habitThreshold=0.7" style, already
// split). Throws std::invalid_argument for unknown keys, unparseable values
// and values outside the declared range.
void apply_override(Globals& globals, std::string_view key, std::string_view value);

// Range problems in the globals block; empty when all are in range.
std::vector<std::string> check_globals(const Globals& globals);

}  // namespace sopra
