#pragma once
// CSV outputs of a run. LF line endings, reals with six decimals, fields
// quoted only when they contain a comma, quote or newline.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "sopra/engine.hpp"

namespace sopra {

std::string format_real(double v);
std::string csv_field(std::string_view raw);

// tick,agent,activity,mode,pressure,score,location,timepoint
std::string events_csv(const Scenario& s, const std::vector<Event>& events);

// tick,habitual_fraction,<one column per atomic activity>,mean_strength,
// mean_personal_view,mean_collective_view
std::string metrics_csv(const Scenario& s, const MetricsTable& table);

// Writes to a sibling temporary and renames over `path`.
void write_file_atomically(const std::filesystem::path& path, std::string_view content);

}  // namespace sopra
