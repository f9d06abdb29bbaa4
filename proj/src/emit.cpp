#include "emit.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include <spinberry/errors.hpp>

namespace spinberry {

namespace {

std::string timestamp_utc() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// One escaping rule for both formats: JSON dump of the scalar.  CSV cells
// therefore carry JSON-quoted strings, which keeps commas unambiguous.
std::string cell(const nlohmann::json& value) { return value.dump(); }

}  // namespace

void Report::add(const std::string& name, const nlohmann::json& value,
                 const std::string& detail) {
  records.push_back({name, value, detail});
}

std::string hash_hex(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

std::string render_json(const Report& report) {
  nlohmann::json j;
  j["format_version"] = 1;
  j["command"] = report.command;
  j["config_hash"] = hash_hex(report.config_hash);
  if (report.with_timestamp) j["timestamp"] = timestamp_utc();
  auto& records = j["records"] = nlohmann::json::array();
  for (const ReportRecord& r : report.records)
    records.push_back(
        {{"name", r.name}, {"value", r.value}, {"detail", r.detail}});
  return j.dump(2) + "\n";
}

std::string render_csv(const Report& report) {
  std::ostringstream out;
  out << "name,value,detail\n";
  out << "_format_version,1,\"\"\n";
  out << "_command," << cell(report.command) << ",\"\"\n";
  out << "_config_hash," << cell(hash_hex(report.config_hash)) << ",\"\"\n";
  if (report.with_timestamp)
    out << "_timestamp," << cell(timestamp_utc()) << ",\"\"\n";
  for (const ReportRecord& r : report.records)
    out << r.name << "," << cell(r.value) << "," << cell(r.detail) << "\n";
  return out.str();
}

void write_report(const Report& report, const std::string& format,
                  const std::string& path) {
  const std::string text =
      format == "csv" ? render_csv(report) : render_json(report);
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file: " + path);
  out << text;
}

}  // namespace spinberry
