#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "homsim/coincidence_engine.hpp"
#include "homsim/errors.hpp"
#include "homsim/spectral_model.hpp"
#include "homsim/units.hpp"

namespace homsim {

inline constexpr int kDefaultGridPoints = 2048;
inline constexpr double kDefaultSpanSigma = 5.0;

/// Grid centered on the degenerate frequency whose half-width is
/// span_sigma filter standard deviations (plus the filter offset, if any).
inline FrequencyGrid grid_for(const OpticalSetup& setup, int points = kDefaultGridPoints,
                              double span_sigma = kDefaultSpanSigma) {
  return {points, std::abs(setup.filter_center_detuning()) + span_sigma * filter_sigma(setup.filter)};
}

/// Experimental configuration: 786 nm degenerate pairs pumped by 1.4 ps pulses
/// at 393 nm, 10 nm filters, 100 um air-spaced etalon with 90% mirrors.
inline OpticalSetup experimental_setup(double tune_phase_rad) {
  OpticalSetup s;
  s.spdc_center_wavelength_nm = 786.0;
  s.pump = {393.0, 1.4};
  s.phase_matching = {};
  s.filter = {786.0, 10.0};
  s.etalon = etalon_from_geometry(100.0, 0.0, 0.90);
  s.etalon.tune_phase_rad = units::wrapPhase(tune_phase_rad);
  return s;
}

struct Preset {
  std::string name;
  OpticalSetup setup;
  FrequencyGrid grid;
  DelaySweep sweep;
};

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"fig3a", "fig3b", "fig3c", "hom"};
  return names;
}

inline Preset make_preset(std::string_view name) {
  Preset p;
  p.name = std::string(name);
  if (name == "fig3a") {
    p.setup = experimental_setup(0.0);
  } else if (name == "fig3b") {
    p.setup = experimental_setup(units::kPi);
  } else if (name == "fig3c") {
    p.setup = experimental_setup(units::kPi / 2.0);
  } else if (name == "hom") {
    p.setup = experimental_setup(0.0);
    p.setup.etalon.enabled = false;
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "' (expected fig3a, fig3b, fig3c or hom)");
  }
  p.grid = grid_for(p.setup);
  p.sweep = {-0.5, 3.5, 600};
  return p;
}

}  // namespace homsim
