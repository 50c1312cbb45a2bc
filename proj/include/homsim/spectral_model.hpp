#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "homsim/errors.hpp"
#include "homsim/grid.hpp"
#include "homsim/setup.hpp"
#include "homsim/units.hpp"

namespace homsim {

using Complex = std::complex<double>;

namespace detail {
inline void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw DomainError(std::string(what) + ": non-finite argument");
}
}  // namespace detail

/// Standard deviation of the pump spectral field amplitude (rad/ps):
/// 2 sqrt(ln 2) / duration for a transform-limited Gaussian pulse.
inline double pump_field_sigma(const PumpSpec& pump) {
  return 2.0 * std::sqrt(std::numbers::ln2) / pump.duration_fwhm_ps;
}

/// Coherence time of the pump (ps): the Gaussian width of its normalized
/// field autocorrelation, exp(-delay^2 / (2 tc^2)).
inline double pump_coherence_time(const PumpSpec& pump) { return std::sqrt(2.0) / pump_field_sigma(pump); }

/// Pump spectral envelope at a sum detuning nu_s + nu_i, measured from twice
/// the degenerate frequency. Real, even, unit peak.
inline double pump_envelope(double sum_detuning, const PumpSpec& pump) {
  detail::require_finite(sum_detuning, "pump_envelope");
  const double sigma = pump_field_sigma(pump);
  return std::exp(-sum_detuning * sum_detuning / (2.0 * sigma * sigma));
}

/// sinc(x) e^{-ix} with x = delta_k L / 2, or 1 for the flat model.
inline Complex phase_matching(double sum_detuning, double diff_detuning, const PhaseMatchingSpec& pm) {
  detail::require_finite(sum_detuning, "phase_matching");
  detail::require_finite(diff_detuning, "phase_matching");
  if (pm.model == PhaseMatchingModel::Flat) return {1.0, 0.0};
  const double x = 0.5 * pm.crystal_length_mm *
                   (pm.sum_coefficient_ps_per_mm * sum_detuning + pm.difference_coefficient_ps_per_mm * diff_detuning);
  const double sinc = std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
  return sinc * std::polar(1.0, -x);
}

/// Standard deviation (rad/ps) of the filter intensity transmission F = f^2.
inline double filter_sigma(const FilterSpec& filter) {
  return units::fwhmToSigma(units::angularWidthFromWavelength(filter.fwhm_nm, filter.center_wavelength_nm));
}

/// Field transmission f of the Gaussian filter at a detuning from its center.
inline double filter_amplitude(double detuning_from_center, const FilterSpec& filter) {
  detail::require_finite(detuning_from_center, "filter_amplitude");
  const double sigma = filter_sigma(filter);
  return std::exp(-detuning_from_center * detuning_from_center / (4.0 * sigma * sigma));
}

/// Etalon round-trip phase at a detuning. The comb is anchored at
/// reference_detuning (the filter center), where the phase equals the tuning
/// phase modulo 2 pi.
inline double etalon_round_trip_phase(double detuning, const EtalonSpec& etalon, double reference_detuning) {
  return (detuning - reference_detuning) * etalon.round_trip_time_ps + etalon.tune_phase_rad;
}

/// Airy transfer function (1 - R) e^{i phi/2} / (1 - R e^{i phi}) of the etalon.
/// Returns exactly 1 when the etalon is disabled.
inline Complex etalon_transfer(double detuning, const EtalonSpec& etalon, double reference_detuning) {
  detail::require_finite(detuning, "etalon_transfer");
  if (!etalon.enabled) return {1.0, 0.0};
  if (!(etalon.reflectivity >= 0.0 && etalon.reflectivity < 1.0))
    throw ConfigError("EtalonSpec: reflectivity must lie in [0, 1)");
  const double phi = etalon_round_trip_phase(detuning, etalon, reference_detuning);
  const double r = etalon.reflectivity;
  return (1.0 - r) * std::polar(1.0, 0.5 * phi) / (1.0 - r * std::polar(1.0, phi));
}

/// Etalon with mirror spacing in um at an internal incidence angle:
/// round-trip time 2 d cos(theta) / c.
inline EtalonSpec etalon_from_geometry(double spacing_um, double incidence_angle_rad, double reflectivity) {
  if (!(spacing_um > 0.0) || !std::isfinite(spacing_um)) throw ConfigError("EtalonSpec: spacing must be > 0");
  EtalonSpec e;
  e.enabled = true;
  e.reflectivity = reflectivity;
  e.round_trip_time_ps = 2.0 * spacing_um * std::cos(incidence_angle_rad) / units::kSpeedOfLightUmPerPs;
  e.tune_phase_rad = 0.0;
  e.validate();
  return e;
}

/// Free spectral range expressed as a wavelength interval at center_nm.
inline double free_spectral_range_nm(const EtalonSpec& etalon, double center_nm) {
  return center_nm * center_nm * etalon.free_spectral_range_thz() / units::kSpeedOfLightNmPerPs;
}

/// Joint spectral amplitude phi(nu_s, nu_i) sampled on a FrequencyGrid.
///
/// Only the band |nu_s + nu_i| <= band_half_width * spacing is stored; the pump
/// envelope has decayed below 1e-12 outside it and at() returns zero there.
/// Row a, band column n holds the node pair (a, n + N - 1 - a).
class JointSpectralAmplitude {
 public:
  /// Pump amplitude below which samples are dropped.
  static constexpr double kBandCutoff = 1e-12;

  JointSpectralAmplitude(FrequencyGrid grid, int band_half_width)
      : grid_(grid),
        half_width_(band_half_width),
        values_(static_cast<std::size_t>(grid.points_per_axis) * (2 * band_half_width + 1)) {}

  const FrequencyGrid& grid() const { return grid_; }
  int points() const { return grid_.points_per_axis; }
  int band_half_width() const { return half_width_; }
  int band_width() const { return 2 * half_width_ + 1; }

  /// Column index b of band entry n in row a (may fall outside [0, N)).
  int column(int a, int n) const { return n + points() - 1 - a; }

  /// Band range of row a restricted to valid columns, as [n_begin, n_end).
  std::pair<int, int> row_band(int a) const {
    const int lo = std::max(-half_width_, a + 1 - points());
    const int hi = std::min(half_width_, a);
    return {lo, hi + 1};
  }

  Complex at(int a, int b) const {
    const int n = a + b + 1 - points();
    if (n < -half_width_ || n > half_width_) return {0.0, 0.0};
    return values_[index(a, n)];
  }

  Complex& band(int a, int n) { return values_[index(a, n)]; }
  const Complex& band(int a, int n) const { return values_[index(a, n)]; }

 private:
  std::size_t index(int a, int n) const {
    return static_cast<std::size_t>(a) * band_width() + static_cast<std::size_t>(n + half_width_);
  }

  FrequencyGrid grid_;
  int half_width_;
  std::vector<Complex> values_;
};

/// Half-width, in grid steps of nu_s + nu_i, of the band where the pump
/// envelope exceeds JointSpectralAmplitude::kBandCutoff.
inline int jsa_band_half_width(const PumpSpec& pump, const FrequencyGrid& grid) {
  const double sum_cut = pump_field_sigma(pump) * std::sqrt(-2.0 * std::log(JointSpectralAmplitude::kBandCutoff));
  const double steps = std::ceil(sum_cut / grid.spacing());
  return static_cast<int>(std::min<double>(steps, grid.points_per_axis - 1));
}

/// Samples pump_envelope(nu_s + nu_i) * phase_matching(nu_s + nu_i, nu_s - nu_i).
/// Both factors have unit analytic peak, so no further scaling is applied.
inline JointSpectralAmplitude build_jsa(const OpticalSetup& setup, const FrequencyGrid& grid) {
  grid.validate();
  setup.pump.validate();
  setup.phase_matching.validate();
  JointSpectralAmplitude jsa(grid, jsa_band_half_width(setup.pump, grid));
  const int N = grid.points_per_axis;
  const double h = grid.spacing();
  std::vector<double> pump(static_cast<std::size_t>(jsa.band_width()));
  for (int n = -jsa.band_half_width(); n <= jsa.band_half_width(); ++n)
    pump[static_cast<std::size_t>(n + jsa.band_half_width())] = pump_envelope(n * h, setup.pump);

  for (int a = 0; a < N; ++a) {
    const auto [n0, n1] = jsa.row_band(a);
    for (int n = n0; n < n1; ++n) {
      const int b = jsa.column(a, n);
      const double p = pump[static_cast<std::size_t>(n + jsa.band_half_width())];
      jsa.band(a, n) = p * phase_matching(n * h, (a - b) * h, setup.phase_matching);
    }
  }
  return jsa;
}

}  // namespace homsim
