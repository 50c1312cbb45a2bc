#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "homsim/errors.hpp"
#include "homsim/feynman_model.hpp"
#include "homsim/presets.hpp"
#include "homsim/setup.hpp"
#include "homsim/spectral_model.hpp"

// Reference computations used only to check the engine and the comb model.
// None of them calls into coincidence_engine.hpp, and brute_force_schemes
// does not reuse relative_rate's closed formula: it builds every amplitude
// from explicit beamsplitter coefficients.

namespace homsim::oracles {

/// Normalized no-etalon trace 1 - V exp(-tau^2 / (2 width^2)).
struct GaussianHomParams {
  double visibility = 1.0;
  double width_ps = 0.0;
};

/// With F(nu) = exp(-(nu - c)^2 / (2 sF^2)) on both arms and a flat-matched JSA
/// that depends only on S = nu_s + nu_i, the integrand factorizes in
/// (S, D = nu_s - nu_i): F F = exp(-((S - 2c)^2 + D^2) / (4 sF^2)). The pump
/// term only touches S and so cancels in the ratio; the D integral of
/// exp(-D^2 / (4 sF^2)) exp(-i D tau) gives exp(-sF^2 tau^2). Hence V = 1 and
/// width = 1 / (sqrt(2) sF), for any pump duration or filter offset.
inline GaussianHomParams gaussian_hom_params(const OpticalSetup& setup) {
  if (setup.etalon.enabled) throw ConfigError("hom_closed_form: unsupported configuration (etalon enabled)");
  if (setup.phase_matching.model != PhaseMatchingModel::Flat)
    throw ConfigError("hom_closed_form: unsupported configuration (sinc phase matching)");
  const double sigma = filter_sigma(setup.filter);
  return {1.0, 1.0 / (std::sqrt(2.0) * sigma)};
}

inline double hom_closed_form(const OpticalSetup& setup, double tau) {
  const auto p = gaussian_hom_params(setup);
  return 1.0 - p.visibility * std::exp(-tau * tau / (2.0 * p.width_ps * p.width_ps));
}

struct Pulse {
  double delay_ps = 0.0;
  std::complex<double> amplitude;
};

/// Time-domain picture of the etalon: pulses (1 - R) R^m e^{i m dphi} at m T.
inline std::vector<Pulse> etalon_impulse_train(const EtalonSpec& etalon, int n_pulses) {
  if (!etalon.enabled) throw ConfigError("etalon_impulse_train: etalon disabled");
  etalon.validate();
  const double r = etalon.reflectivity;
  const int n = r == 0.0 ? std::min(n_pulses, 1) : n_pulses;
  std::vector<Pulse> train;
  double magnitude = 1.0 - r;
  for (int m = 0; m < n; ++m) {
    train.push_back({m * etalon.round_trip_time_ps, std::polar(magnitude, m * etalon.tune_phase_rad)});
    magnitude *= r;
  }
  return train;
}

inline double train_energy(const std::vector<Pulse>& train) {
  double e = 0.0;
  for (const auto& p : train) e += std::norm(p.amplitude);
  return e;
}

/// Mean of |f_e|^2 over one free spectral range, midpoint rule.
inline double mean_transmission_over_fsr(const EtalonSpec& etalon, int samples = 4096) {
  const double fsr = units::kTwoPi / etalon.round_trip_time_ps;
  double sum = 0.0;
  for (int k = 0; k < samples; ++k) sum += std::norm(etalon_transfer((k + 0.5) * fsr / samples, etalon, 0.0));
  return sum / samples;
}

inline constexpr int kMaxBruteForceIndex = 12;

/// Coincidence probability at tau_j normalized to distinguishable photons,
/// from explicit two-photon amplitudes through a 50/50 beamsplitter with
/// t = 1/sqrt(2) and r = i/sqrt(2). In scheme m the signal made m round trips
/// and both photons were transmitted, or it made j - m round trips and both
/// were reflected. A fraction `coherence` of the pair population interferes;
/// the rest adds probabilities.
inline double brute_force_schemes(int j, double delta_phi, const SchemeWeights& weights, double coherence = 1.0) {
  if (j < 0) throw DomainError("brute_force_schemes: j must be >= 0");
  if (j > kMaxBruteForceIndex) throw DomainError("brute_force_schemes: j exceeds the enumeration bound");
  using C = std::complex<double>;
  const C t(1.0 / std::sqrt(2.0), 0.0);
  const C r(0.0, 1.0 / std::sqrt(2.0));
  const double transmission = weights.equal ? 1.0 : 1.0 - weights.reflectivity;
  auto signal_amplitude = [&](int round_trips) {
    C a(transmission, 0.0);
    for (int k = 0; k < round_trips; ++k) a *= C(weights.equal ? 1.0 : weights.reflectivity, 0.0) *
                                                std::polar(1.0, delta_phi);
    return a;
  };
  double coincident = 0.0, distinguishable = 0.0;
  for (int m = 0; m <= j; ++m) {
    const C both_transmitted = signal_amplitude(m) * t * t;
    const C both_reflected = signal_amplitude(j - m) * r * r;
    const double separate = std::norm(both_transmitted) + std::norm(both_reflected);
    coincident += coherence * std::norm(both_transmitted + both_reflected) + (1.0 - coherence) * separate;
    distinguishable += separate;
  }
  return coincident / distinguishable;
}

/// Long pump and high-finesse etalon: the regime where the comb-state model's
/// approximations hold and must agree with the full integral.
inline OpticalSetup high_r_reference_setup() {
  OpticalSetup s = experimental_setup(0.0);
  s.pump.duration_fwhm_ps = 20.0;
  s.etalon.reflectivity = 0.98;
  return s;
}

/// Grid for high_r_reference_setup: 0.98^(round trips per grid period) must be
/// negligible, which needs a much finer spacing than the experimental preset.
inline FrequencyGrid high_r_reference_grid() { return grid_for(high_r_reference_setup(), 8192, 4.0); }

}  // namespace homsim::oracles
