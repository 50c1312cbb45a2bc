#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>

#include "homsim/coincidence_engine.hpp"
#include "homsim/errors.hpp"
#include "homsim/presets.hpp"
#include "homsim/units.hpp"

namespace homsim {

enum class OutputFormat { Csv, Json };
enum class EngineSelection { Direct, Fft, Both };

struct RunConfig {
  std::string preset_name;  ///< empty when built from scratch
  OpticalSetup setup;
  int grid_points = kDefaultGridPoints;
  double span_sigma = kDefaultSpanSigma;
  DelaySweep sweep;
  std::string output_path;
  OutputFormat format = OutputFormat::Csv;
  EngineSelection engine = EngineSelection::Fft;
  int workers = 1;

  FrequencyGrid grid() const { return grid_for(setup, grid_points, span_sigma); }

  void validate() const {
    setup.validate();
    if (std::abs(setup.pump.center_wavelength_nm - 0.5 * setup.spdc_center_wavelength_nm) >
        1e-9 * setup.spdc_center_wavelength_nm)
      throw ConfigError("PumpSpec: center_wavelength must be half the SPDC center wavelength (degenerate emission)");
    if (!(span_sigma >= 4.0) || !std::isfinite(span_sigma))
      throw ConfigError("FrequencyGrid: span must cover at least 4 filter standard deviations");
    grid().validate();
    sweep.validate();
    if (workers < 1) throw ConfigError("RunConfig: workers must be >= 1");
  }
};

inline RunConfig preset_config(std::string_view name) {
  const Preset p = make_preset(name);
  RunConfig c;
  c.preset_name = p.name;
  c.setup = p.setup;
  c.sweep = p.sweep;
  return c;
}

inline OutputFormat parse_output_format(std::string_view s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw ConfigError("unknown output format '" + std::string(s) + "' (expected csv or json)");
}

inline EngineSelection parse_engine(std::string_view s) {
  if (s == "direct") return EngineSelection::Direct;
  if (s == "fft") return EngineSelection::Fft;
  if (s == "both") return EngineSelection::Both;
  throw ConfigError("unknown engine '" + std::string(s) + "' (expected direct, fft or both)");
}

inline const char* to_string(EngineSelection e) {
  switch (e) {
    case EngineSelection::Direct: return "direct";
    case EngineSelection::Fft: return "fft";
    case EngineSelection::Both: return "both";
  }
  return "?";
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::optional<double> parse_plain_number(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace detail

/// Parses a real number; angles may also be written as multiples of pi:
/// "pi", "-pi", "0.5*pi", "pi/2", "3*pi/4".
inline std::optional<double> parse_number(std::string_view text) {
  using detail::trim;
  text = trim(text);
  const auto pos = text.find("pi");
  if (pos == std::string_view::npos) return detail::parse_plain_number(text);
  double factor = 1.0;
  std::string_view head = trim(text.substr(0, pos));
  if (head == "-") {
    factor = -1.0;
  } else if (!head.empty()) {
    if (head.back() != '*') return std::nullopt;
    const auto f = detail::parse_plain_number(head.substr(0, head.size() - 1));
    if (!f) return std::nullopt;
    factor = *f;
  }
  std::string_view tail = trim(text.substr(pos + 2));
  double divisor = 1.0;
  if (!tail.empty()) {
    if (tail.front() != '/') return std::nullopt;
    const auto d = detail::parse_plain_number(tail.substr(1));
    if (!d || *d == 0.0) return std::nullopt;
    divisor = *d;
  }
  return factor * units::kPi / divisor;
}

/// Parses the flat `section.key = value` format (`#` starts a comment).
/// A `preset = NAME` entry seeds every field from that preset regardless of
/// where it appears; all other keys override it. Unknown or repeated keys are
/// errors.
inline RunConfig parse_config(std::string_view text) {
  struct Entry {
    std::string value;
    int line;
  };
  std::map<std::string, Entry> entries;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no);
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string value(detail::trim(line.substr(eq + 1)));
    if (key.empty()) throw ParseError("missing key", line_no);
    if (value.empty()) throw ParseError("missing value for '" + key + "'", line_no);
    if (!entries.emplace(key, Entry{value, line_no}).second)
      throw ParseError("duplicate key '" + key + "'", line_no);
  }
  if (entries.empty()) throw ParseError("empty configuration", 0);

  RunConfig cfg;
  cfg.setup = experimental_setup(0.0);
  cfg.setup.etalon.enabled = false;
  if (auto it = entries.find("preset"); it != entries.end()) {
    try {
      cfg = preset_config(it->second.value);
    } catch (const ConfigError& e) {
      throw ParseError(e.what(), it->second.line);
    }
    entries.erase(it);
  }

  auto number = [](const std::string& key, const Entry& e) {
    const auto v = parse_number(e.value);
    if (!v) throw ParseError("'" + key + "' expects a number, got '" + e.value + "'", e.line);
    return *v;
  };
  auto integer = [&](const std::string& key, const Entry& e) {
    const double v = number(key, e);
    if (v != std::floor(v) || std::abs(v) > 1e9)
      throw ParseError("'" + key + "' expects an integer, got '" + e.value + "'", e.line);
    return static_cast<int>(v);
  };
  auto boolean = [](const std::string& key, const Entry& e) {
    if (e.value == "true" || e.value == "yes" || e.value == "1") return true;
    if (e.value == "false" || e.value == "no" || e.value == "0") return false;
    throw ParseError("'" + key + "' expects true or false, got '" + e.value + "'", e.line);
  };

  std::optional<double> spacing_um, incidence_deg, round_trip_ps;
  bool pump_center_given = false;
  for (const auto& [key, e] : entries) {
    auto& s = cfg.setup;
    try {
      if (key == "spdc.center_wavelength_nm") s.spdc_center_wavelength_nm = number(key, e);
      else if (key == "pump.center_wavelength_nm") { s.pump.center_wavelength_nm = number(key, e); pump_center_given = true; }
      else if (key == "pump.duration_fwhm_ps") s.pump.duration_fwhm_ps = number(key, e);
      else if (key == "phase_matching.model") {
        if (e.value == "flat") s.phase_matching.model = PhaseMatchingModel::Flat;
        else if (e.value == "sinc") s.phase_matching.model = PhaseMatchingModel::Sinc;
        else throw ParseError("'phase_matching.model' expects flat or sinc, got '" + e.value + "'", e.line);
      }
      else if (key == "phase_matching.crystal_length_mm") s.phase_matching.crystal_length_mm = number(key, e);
      else if (key == "phase_matching.sum_coefficient_ps_per_mm") s.phase_matching.sum_coefficient_ps_per_mm = number(key, e);
      else if (key == "phase_matching.difference_coefficient_ps_per_mm") s.phase_matching.difference_coefficient_ps_per_mm = number(key, e);
      else if (key == "filter.center_wavelength_nm") s.filter.center_wavelength_nm = number(key, e);
      else if (key == "filter.fwhm_nm") s.filter.fwhm_nm = number(key, e);
      else if (key == "etalon.enabled") s.etalon.enabled = boolean(key, e);
      else if (key == "etalon.reflectivity") s.etalon.reflectivity = number(key, e);
      else if (key == "etalon.spacing_um") spacing_um = number(key, e);
      else if (key == "etalon.incidence_angle_deg") incidence_deg = number(key, e);
      else if (key == "etalon.round_trip_time_ps") round_trip_ps = number(key, e);
      else if (key == "etalon.tune_phase_rad") s.etalon.tune_phase_rad = units::wrapPhase(number(key, e));
      else if (key == "grid.points") cfg.grid_points = integer(key, e);
      else if (key == "grid.span_sigma") cfg.span_sigma = number(key, e);
      else if (key == "sweep.tau_start_ps") cfg.sweep.start_ps = number(key, e);
      else if (key == "sweep.tau_end_ps") cfg.sweep.end_ps = number(key, e);
      else if (key == "sweep.steps") cfg.sweep.steps = integer(key, e);
      else if (key == "output.path") cfg.output_path = e.value;
      else if (key == "output.format") cfg.format = parse_output_format(e.value);
      else if (key == "engine.path") cfg.engine = parse_engine(e.value);
      else if (key == "engine.workers") cfg.workers = integer(key, e);
      else throw ParseError("unknown key '" + key + "'", e.line);
    } catch (const ParseError&) {
      throw;
    } catch (const ConfigError& err) {
      throw ParseError(err.what(), e.line);
    }
  }

  if (round_trip_ps && (spacing_um || incidence_deg))
    throw ConfigError("EtalonSpec: give either etalon.round_trip_time_ps or the spacing/angle geometry, not both");
  if (spacing_um || incidence_deg) {
    const double d = spacing_um.value_or(100.0);
    const double angle = incidence_deg.value_or(0.0) * units::kPi / 180.0;
    if (!(d > 0.0)) throw ConfigError("EtalonSpec: spacing must be > 0");
    cfg.setup.etalon.round_trip_time_ps = 2.0 * d * std::cos(angle) / units::kSpeedOfLightUmPerPs;
  }
  if (round_trip_ps) cfg.setup.etalon.round_trip_time_ps = *round_trip_ps;
  if (!pump_center_given) cfg.setup.pump.center_wavelength_nm = 0.5 * cfg.setup.spdc_center_wavelength_nm;

  cfg.validate();
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace homsim
