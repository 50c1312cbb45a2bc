#pragma once

#include <charconv>
#include <fstream>
#include <string>
#include <system_error>

#include <json.hpp>

#include "homsim/coincidence_engine.hpp"
#include "homsim/errors.hpp"

namespace homsim {

/// Shortest decimal text that round-trips to the same double.
inline std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

inline constexpr const char* kCsvHeader = "tau_ps,rate,normalized_rate";

/// CSV with LF line endings and '.' decimal separator.
inline std::string trace_to_csv(const CoincidenceTrace& trace) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& s : trace.samples) {
    out += format_double(s.tau_ps);
    out += ',';
    out += format_double(s.rate);
    out += ',';
    out += format_double(s.normalized_rate);
    out += '\n';
  }
  return out;
}

inline std::string trace_to_json(const CoincidenceTrace& trace, const nlohmann::json& metadata) {
  nlohmann::json j;
  j["metadata"] = metadata;
  auto& samples = j["samples"] = nlohmann::json::array();
  for (const auto& s : trace.samples)
    samples.push_back({{"tau_ps", s.tau_ps}, {"rate", s.rate}, {"normalized_rate", s.normalized_rate}});
  return j.dump(2) + "\n";
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace homsim
