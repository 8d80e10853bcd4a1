#include "sopra/csv_export.hpp"

#include <cstdio>
#include <fstream>

#include "sopra/scenario_io.hpp"

namespace sopra {

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string csv_field(std::string_view raw) {
  if (raw.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(raw);
  std::string out = "\"";
  for (const char c : raw) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string events_csv(const Scenario& s, const std::vector<Event>& events) {
  std::string out = "tick,agent,activity,mode,pressure,score,location,timepoint\n";
  for (const auto& ev : events) {
    out += std::to_string(ev.tick);
    out += ',';
    out += csv_field(s.agent_decl(ev.agent).id);
    out += ',';
    out += csv_field(s.id(ev.activity));
    out += ',';
    out += to_string(ev.mode);
    out += ',';
    out += format_real(ev.pressure);
    out += ',';
    out += format_real(ev.score);
    out += ',';
    out += csv_field(s.id(ev.location));
    out += ',';
    if (ev.timepoint) out += csv_field(s.id(*ev.timepoint));
    out += '\n';
  }
  return out;
}

std::string metrics_csv(const Scenario& s, const MetricsTable& table) {
  std::string out = "tick,habitual_fraction";
  for (const auto a : table.activities) {
    out += ',';
    out += csv_field(s.id(a));
  }
  out += ",mean_strength,mean_personal_view,mean_collective_view\n";
  for (const auto& row : table.rows) {
    out += std::to_string(row.tick);
    out += ',';
    out += format_real(row.habitualFraction);
    for (const auto c : row.counts) {
      out += ',';
      out += std::to_string(c);
    }
    out += ',';
    out += format_real(row.meanStrength);
    out += ',';
    out += format_real(row.meanPersonalView);
    out += ',';
    out += format_real(row.meanCollectiveView);
    out += '\n';
  }
  return out;
}

void write_file_atomically(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place at '" + path.string() + "'");
  }
}

}  // namespace sopra
