#pragma once

#include <cmath>
#include <numbers>

namespace homsim {

// Internal units: time in ps, angular frequency in rad/ps, wavelength in nm.
namespace units {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Vacuum speed of light in nm/ps.
inline constexpr double kSpeedOfLightNmPerPs = 299792.458;
/// Vacuum speed of light in um/ps.
inline constexpr double kSpeedOfLightUmPerPs = 299.792458;

inline double angularFrequency(double wavelength_nm) {
  return kTwoPi * kSpeedOfLightNmPerPs / wavelength_nm;
}

/// Converts a wavelength width at a given center into an angular-frequency
/// width (first order, |d omega| = 2 pi c d lambda / lambda^2).
inline double angularWidthFromWavelength(double width_nm, double center_nm) {
  return kTwoPi * kSpeedOfLightNmPerPs * width_nm / (center_nm * center_nm);
}

/// Gaussian intensity FWHM -> standard deviation.
inline double fwhmToSigma(double fwhm) {
  return fwhm / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
}

/// Reduce an angle to [0, 2 pi).
inline double wrapPhase(double phase) {
  double r = std::fmod(phase, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

}  // namespace units
}  // namespace homsim
