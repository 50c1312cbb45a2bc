#pragma once

#include <cmath>
#include <string>

#include "homsim/errors.hpp"
#include "homsim/units.hpp"

namespace homsim {

struct PumpSpec {
  double center_wavelength_nm = 393.0;
  /// Transform-limited intensity FWHM of the pump pulse.
  double duration_fwhm_ps = 1.4;

  void validate() const {
    if (!(center_wavelength_nm > 0.0) || !std::isfinite(center_wavelength_nm))
      throw ConfigError("PumpSpec: center_wavelength must be > 0");
    if (!(duration_fwhm_ps > 0.0) || !std::isfinite(duration_fwhm_ps))
      throw ConfigError("PumpSpec: duration_fwhm must be > 0");
  }
};

enum class PhaseMatchingModel { Flat, Sinc };

/// Linearized crystal phase mismatch: delta_k L / 2 =
/// (sum_coefficient * (nu_s + nu_i) + difference_coefficient * (nu_s - nu_i)) * L / 2.
struct PhaseMatchingSpec {
  PhaseMatchingModel model = PhaseMatchingModel::Flat;
  double crystal_length_mm = 3.0;
  double sum_coefficient_ps_per_mm = 0.0;
  double difference_coefficient_ps_per_mm = 0.0;

  void validate() const {
    if (model == PhaseMatchingModel::Flat) return;
    if (!(crystal_length_mm > 0.0) || !std::isfinite(crystal_length_mm))
      throw ConfigError("PhaseMatchingSpec: crystal_length must be > 0 for the sinc model");
    if (!std::isfinite(sum_coefficient_ps_per_mm) || !std::isfinite(difference_coefficient_ps_per_mm))
      throw ConfigError("PhaseMatchingSpec: coefficients must be finite");
  }
};

/// Gaussian interference filter, identical in front of both detectors.
struct FilterSpec {
  double center_wavelength_nm = 786.0;
  /// Intensity-transmission FWHM.
  double fwhm_nm = 10.0;

  void validate() const {
    if (!(center_wavelength_nm > 0.0) || !std::isfinite(center_wavelength_nm))
      throw ConfigError("FilterSpec: center_wavelength must be > 0");
    if (!(fwhm_nm > 0.0) || !std::isfinite(fwhm_nm))
      throw ConfigError("FilterSpec: fwhm must be > 0");
  }
};

/// Air-spaced Fabry-Perot etalon in the signal arm.
///
/// The comb is parameterized by its round-trip time and a tuning phase added
/// to the round-trip phase. tune_phase = 0 puts a transmission maximum on the
/// filter center; tune_phase = pi shifts the comb by half a free spectral range.
struct EtalonSpec {
  bool enabled = false;
  /// Intensity reflectivity of each mirror, in [0, 1).
  double reflectivity = 0.0;
  double round_trip_time_ps = 1.0;
  /// Residual inter-pulse phase, stored reduced to [0, 2 pi).
  double tune_phase_rad = 0.0;

  void validate() const {
    if (!(reflectivity >= 0.0 && reflectivity < 1.0))
      throw ConfigError("EtalonSpec: reflectivity must lie in [0, 1), got " + std::to_string(reflectivity));
    if (!(round_trip_time_ps > 0.0) || !std::isfinite(round_trip_time_ps))
      throw ConfigError("EtalonSpec: round_trip_time must be > 0");
    if (!std::isfinite(tune_phase_rad)) throw ConfigError("EtalonSpec: tune_phase must be finite");
  }

  /// Free spectral range in THz.
  double free_spectral_range_thz() const { return 1.0 / round_trip_time_ps; }
};

/// Every parameter of one simulated interferometer.
struct OpticalSetup {
  PumpSpec pump;
  PhaseMatchingSpec phase_matching;
  FilterSpec filter;
  EtalonSpec etalon;
  /// Degenerate signal/idler wavelength; frequency detunings are measured from it.
  double spdc_center_wavelength_nm = 786.0;

  void validate() const {
    if (!(spdc_center_wavelength_nm > 0.0) || !std::isfinite(spdc_center_wavelength_nm))
      throw ConfigError("OpticalSetup: spdc_center_wavelength must be > 0");
    pump.validate();
    phase_matching.validate();
    filter.validate();
    etalon.validate();
  }

  double center_angular_frequency() const { return units::angularFrequency(spdc_center_wavelength_nm); }

  /// Filter center as a detuning from the degenerate SPDC frequency (rad/ps).
  double filter_center_detuning() const {
    return units::angularFrequency(filter.center_wavelength_nm) - center_angular_frequency();
  }
};

}  // namespace homsim
