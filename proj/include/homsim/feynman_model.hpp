#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "homsim/errors.hpp"

namespace homsim {

// Simplified comb-state picture of the recurrent features. At idler delay
// tau_j = j T / 2 there are j + 1 firing schemes m = 0..j; in each, the
// amplitude with m signal round trips interferes with the one with j - m
// round trips, with relative phase (j - 2m) * delta_phi and a minus sign from
// the beamsplitter.

enum class FeatureKind { Dip, Peak, Flat };

inline const char* to_string(FeatureKind k) {
  switch (k) {
    case FeatureKind::Dip: return "dip";
    case FeatureKind::Peak: return "peak";
    case FeatureKind::Flat: return "flat";
  }
  return "?";
}

/// Path weights of the two amplitudes in a scheme. `equal` is the
/// negligible-decay limit (all weights 1); otherwise weights decay as R^m.
struct SchemeWeights {
  bool equal = true;
  double reflectivity = 0.0;

  static SchemeWeights equal_weights() { return {true, 0.0}; }
  static SchemeWeights decaying(double r) { return {false, r}; }

  void validate() const {
    if (!equal && !(reflectivity >= 0.0 && reflectivity < 1.0))
      throw DomainError("SchemeWeights: reflectivity must lie in [0, 1)");
  }
  /// Relative amplitude after m round trips (the common (1 - R) is dropped).
  double weight(int m) const { return equal ? 1.0 : std::pow(reflectivity, m); }
};

struct FiringScheme {
  int j = 0;
  int m = 0;
  double phase_difference = 0.0;
  /// Amplitudes (1 - R) R^m and (1 - R) R^(j - m); (1, 1) for equal weights.
  double first_weight = 1.0;
  double second_weight = 1.0;
};

inline std::vector<FiringScheme> enumerate_schemes(int j, double delta_phi, const SchemeWeights& weights) {
  if (j < 0) throw DomainError("enumerate_schemes: j must be >= 0");
  weights.validate();
  const double transmission = weights.equal ? 1.0 : 1.0 - weights.reflectivity;
  std::vector<FiringScheme> schemes;
  schemes.reserve(static_cast<std::size_t>(j) + 1);
  for (int m = 0; m <= j; ++m)
    schemes.push_back({j, m, (j - 2 * m) * delta_phi, transmission * weights.weight(m),
                       transmission * weights.weight(j - m)});
  return schemes;
}

struct FeaturePrediction {
  int j = 0;
  double tau_ps = 0.0;
  double relative_rate = 1.0;
  FeatureKind classification = FeatureKind::Flat;
  double pump_coherence_factor = 1.0;
};

inline constexpr double kFlatBandTolerance = 0.02;

/// Gaussian pump coherence factor for the generation-time difference j T / 2.
/// An infinite coherence time gives 1.
inline double pump_coherence_factor(int j, double round_trip_time_ps, double coherence_time_ps) {
  if (std::isinf(coherence_time_ps)) return 1.0;
  const double delay = 0.5 * j * round_trip_time_ps;
  return std::exp(-delay * delay / (2.0 * coherence_time_ps * coherence_time_ps));
}

inline FeatureKind classify(double relative_rate, double tolerance = kFlatBandTolerance) {
  if (relative_rate < 1.0 - tolerance) return FeatureKind::Dip;
  if (relative_rate > 1.0 + tolerance) return FeatureKind::Peak;
  return FeatureKind::Flat;
}

/// Coincidence probability at tau_j relative to the incoherent baseline:
///   sum_m (w_m^2 + w_{j-m}^2 - 2 gamma_j w_m w_{j-m} cos((j - 2m) delta_phi))
///   / sum_m (w_m^2 + w_{j-m}^2)
/// The pump coherence factor gamma_j scales only the cross term.
inline FeaturePrediction relative_rate(int j, double delta_phi, const SchemeWeights& weights,
                                       double coherence_time_ps, double round_trip_time_ps,
                                       double tolerance = kFlatBandTolerance) {
  if (j < 0) throw DomainError("relative_rate: j must be >= 0");
  weights.validate();
  if (!(coherence_time_ps > 0.0)) throw DomainError("relative_rate: coherence time must be > 0");
  const double gamma = pump_coherence_factor(j, round_trip_time_ps, coherence_time_ps);
  double numerator = 0.0, denominator = 0.0;
  for (int m = 0; m <= j; ++m) {
    const double w1 = weights.weight(m), w2 = weights.weight(j - m);
    const double incoherent = w1 * w1 + w2 * w2;
    numerator += incoherent - 2.0 * gamma * w1 * w2 * std::cos((j - 2 * m) * delta_phi);
    denominator += incoherent;
  }
  FeaturePrediction p;
  p.j = j;
  p.tau_ps = 0.5 * j * round_trip_time_ps;
  p.relative_rate = numerator / denominator;
  p.pump_coherence_factor = gamma;
  p.classification = classify(p.relative_rate, tolerance);
  return p;
}

inline std::vector<FeaturePrediction> predict_trace_skeleton(double delta_phi, const SchemeWeights& weights,
                                                             double coherence_time_ps, double round_trip_time_ps,
                                                             int j_max, double tolerance = kFlatBandTolerance) {
  if (j_max < 0) throw DomainError("predict_trace_skeleton: j_max must be >= 0");
  std::vector<FeaturePrediction> out;
  for (int j = 0; j <= j_max; ++j)
    out.push_back(relative_rate(j, delta_phi, weights, coherence_time_ps, round_trip_time_ps, tolerance));
  return out;
}

}  // namespace homsim
