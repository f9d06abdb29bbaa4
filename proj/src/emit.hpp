#ifndef SPINBERRY_EMIT_HPP
#define SPINBERRY_EMIT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

// Deterministic report emission: fixed record order, shortest-roundtrip
// number text shared by the JSON and CSV renderers, no wall-clock content
// unless the timestamp field is switched on.

namespace spinberry {

struct ReportRecord {
  std::string name;
  nlohmann::json value;  // number, string, or bool
  std::string detail;
};

struct Report {
  std::string command;
  std::uint64_t config_hash = 0;
  bool with_timestamp = false;
  std::vector<ReportRecord> records;

  void add(const std::string& name, const nlohmann::json& value,
           const std::string& detail = "");
};

std::string hash_hex(std::uint64_t h);
std::string render_json(const Report& report);
std::string render_csv(const Report& report);

// Renders in the requested format and writes to the path, or to stdout when
// the path is empty.
void write_report(const Report& report, const std::string& format,
                  const std::string& path);

}  // namespace spinberry

#endif
