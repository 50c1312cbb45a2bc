#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <string>
#include <vector>

#include "homsim/chirp_z.hpp"
#include "homsim/errors.hpp"
#include "homsim/grid.hpp"
#include "homsim/parallel.hpp"
#include "homsim/setup.hpp"
#include "homsim/spectral_model.hpp"
#include "homsim/units.hpp"

namespace homsim {

/// Uniform scan of the idler delay. Positive tau is extra idler path.
struct DelaySweep {
  double start_ps = -0.5;
  double end_ps = 3.5;
  int steps = 600;

  void validate() const {
    if (!std::isfinite(start_ps) || !std::isfinite(end_ps) || !(start_ps < end_ps))
      throw ConfigError("DelaySweep: start must be < end");
    if (steps < 2) throw ConfigError("DelaySweep: steps must be >= 2");
  }
  double step() const { return (end_ps - start_ps) / (steps - 1); }
  double tau(int i) const { return start_ps + i * step(); }
};

enum class EnginePath { Direct, Fft };

inline const char* to_string(EnginePath p) { return p == EnginePath::Direct ? "direct" : "fft"; }

/// Deliberate defects used to check that the verification suite notices them.
enum class Fault {
  None,
  FlipCrossTermSign,  ///< R_c = baseline + interference
  AbsoluteCombPhase,  ///< comb phase anchored at zero absolute frequency instead of the filter center
  PerturbFftPath,     ///< adds 1e-3 * baseline to every FFT-path interference value
};

struct EngineOptions {
  int workers = 1;
  Fault fault = Fault::None;
};

struct TraceSample {
  double tau_ps = 0.0;
  double rate = 0.0;
  double normalized_rate = 0.0;
};

struct CoincidenceTrace {
  std::vector<TraceSample> samples;
  /// The tau-independent first term of the rate integral; normalization reference.
  double baseline_rate = 0.0;
  FrequencyGrid grid;
  EnginePath path = EnginePath::Direct;
  /// max_tau |Im(interference integral)| / baseline.
  double max_imaginary_residue = 0.0;
  std::vector<std::string> warnings;
};

/// Relative tolerance shared by the Hermiticity and negative-rate checks.
inline constexpr double kConsistencyTolerance = 1e-9;
/// Largest FFT/direct disagreement (in units of the baseline) before falling back.
inline constexpr double kFftAgreementTolerance = 1e-6;
/// Convergence self-test threshold on normalized traces.
inline constexpr double kConvergenceTolerance = 1e-4;

/// The integrand of the coincidence-rate integral sampled once on a grid.
///
/// With F the filter intensity, phi the JSA and f_e the etalon transfer:
///   baseline     = 1/4 sum F(s) F(i) |phi(s,i)|^2 |f_e(s)|^2 h^2
///   cross(s, i)  = F(s) F(i) phi(s,i) phi*(i,s) f_e(s) f_e*(i)
///   interference(tau) = 1/4 sum cross(s,i) exp(-i (s - i)(tau + tau_0)) h^2
/// tau_0 is half a round trip when the etalon is in place, so that tau = 0 is
/// the delay where directly transmitted signal photons meet the idler.
class SpectralIntegrand {
 public:
  SpectralIntegrand(const OpticalSetup& setup, const FrequencyGrid& grid, const EngineOptions& options = {})
      : grid_(grid), fault_(options.fault), jsa_(build_jsa(setup, grid)) {
    setup.validate();
    check_grid(setup, grid);

    const int N = grid.points_per_axis;
    const double h = grid.spacing();
    nodes_.resize(static_cast<std::size_t>(N));
    for (int k = 0; k < N; ++k) nodes_[static_cast<std::size_t>(k)] = grid.node(k);

    const double filter_center = setup.filter_center_detuning();
    const double comb_reference =
        fault_ == Fault::AbsoluteCombPhase ? -setup.center_angular_frequency() : filter_center;
    std::vector<double> filter(static_cast<std::size_t>(N));
    std::vector<Complex> etalon(static_cast<std::size_t>(N));
    for (int k = 0; k < N; ++k) {
      const double nu = nodes_[static_cast<std::size_t>(k)];
      const double f = filter_amplitude(nu - filter_center, setup.filter);
      filter[static_cast<std::size_t>(k)] = f * f;
      etalon[static_cast<std::size_t>(k)] = etalon_transfer(nu, setup.etalon, comb_reference);
    }
    delay_offset_ = setup.etalon.enabled ? 0.5 * setup.etalon.round_trip_time_ps : 0.0;

    cross_.assign(static_cast<std::size_t>(N) * jsa_.band_width(), Complex{});
    std::vector<double> row_baseline(static_cast<std::size_t>(N), 0.0);
    detail::parallel_for(static_cast<std::size_t>(N), options.workers, [&](std::size_t row) {
      const int a = static_cast<int>(row);
      const auto [n0, n1] = jsa_.row_band(a);
      const Complex fe_a = etalon[row];
      double sum = 0.0;
      for (int n = n0; n < n1; ++n) {
        const int b = jsa_.column(a, n);
        const double weight = filter[row] * filter[static_cast<std::size_t>(b)];
        const Complex phi = jsa_.band(a, n);
        const Complex phi_swapped = jsa_.at(b, a);
        sum += weight * std::norm(phi);
        cross_[cross_index(a, n)] = weight * (phi * std::conj(phi_swapped)) * (fe_a * std::conj(etalon[static_cast<std::size_t>(b)]));
      }
      row_baseline[row] = sum * std::norm(fe_a);
    });
    double total = 0.0;
    for (double v : row_baseline) total += v;  // fixed row order
    scale_ = 0.25 * h * h;
    baseline_ = scale_ * total;
    if (!(baseline_ > 0.0) || !std::isfinite(baseline_))
      throw NumericalConsistencyError("baseline rate is not strictly positive; grid misses the spectral support");
  }

  const FrequencyGrid& grid() const { return grid_; }
  const JointSpectralAmplitude& jsa() const { return jsa_; }
  double baseline() const { return baseline_; }
  double delay_offset() const { return delay_offset_; }
  Fault fault() const { return fault_; }

  /// Complex interference integral at one delay by direct summation.
  Complex interference(double tau) const {
    const int N = grid_.points_per_axis;
    const double t = tau + delay_offset_;
    std::vector<double> cr(static_cast<std::size_t>(N)), ci(static_cast<std::size_t>(N));
    for (int k = 0; k < N; ++k) {
      // conj(exp(-i nu t)) for the idler axis
      const double ph = nodes_[static_cast<std::size_t>(k)] * t;
      cr[static_cast<std::size_t>(k)] = std::cos(ph);
      ci[static_cast<std::size_t>(k)] = std::sin(ph);
    }
    double re = 0.0, im = 0.0;
    for (int a = 0; a < N; ++a) {
      const auto [n0, n1] = jsa_.row_band(a);
      const Complex* row = &cross_[cross_index(a, 0)];
      double rr = 0.0, ri = 0.0;
      for (int n = n0; n < n1; ++n) {
        const std::size_t b = static_cast<std::size_t>(jsa_.column(a, n));
        const double hr = row[n].real(), hi = row[n].imag();
        rr += hr * cr[b] - hi * ci[b];
        ri += hr * ci[b] + hi * cr[b];
      }
      // multiply by exp(-i nu_a t) = conj of the stored idler factor at a
      const double er = cr[static_cast<std::size_t>(a)], ei = -ci[static_cast<std::size_t>(a)];
      re += rr * er - ri * ei;
      im += rr * ei + ri * er;
    }
    return scale_ * Complex(re, im);
  }

  /// h(u_k) = sum over the anti-diagonal nu_s - nu_i = u_k of the cross
  /// integrand, including the 1/4 h^2 measure; index k covers
  /// u_k = (k - (N - 1)) * spacing for k in [0, 2N - 1).
  std::vector<Complex> anti_diagonal_profile() const {
    const int N = grid_.points_per_axis;
    std::vector<Complex> profile(static_cast<std::size_t>(2 * N - 1), Complex{});
    for (int a = 0; a < N; ++a) {
      const auto [n0, n1] = jsa_.row_band(a);
      for (int n = n0; n < n1; ++n) {
        const int b = jsa_.column(a, n);
        profile[static_cast<std::size_t>(a - b + N - 1)] += cross_[cross_index(a, n)];
      }
    }
    for (auto& v : profile) v *= scale_;
    return profile;
  }

  /// Combines the two terms and applies the consistency checks.
  double rate_from_interference(double tau, Complex interference_value) const {
    check_hermitian(tau, interference_value);
    const double cross = interference_value.real();
    double rate = fault_ == Fault::FlipCrossTermSign ? baseline_ + cross : baseline_ - cross;
    if (rate < 0.0) {
      if (rate >= -kConsistencyTolerance * baseline_) return 0.0;
      char buf[200];
      std::snprintf(buf, sizeof buf, "negative coincidence rate %.6e (baseline %.6e) at tau = %.6f ps", rate,
                    baseline_, tau);
      throw NumericalConsistencyError(buf);
    }
    return rate;
  }

  void check_hermitian(double tau, Complex interference_value) const {
    if (std::abs(interference_value.imag()) > kConsistencyTolerance * baseline_) {
      char buf[240];
      std::snprintf(buf, sizeof buf,
                    "interference integral not real at tau = %.6f ps: imag = %.6e, baseline = %.6e, "
                    "tolerance = %.1e x baseline",
                    tau, interference_value.imag(), baseline_, kConsistencyTolerance);
      throw NumericalConsistencyError(buf);
    }
  }

 private:
  std::size_t cross_index(int a, int n) const {
    return static_cast<std::size_t>(a) * jsa_.band_width() + static_cast<std::size_t>(n + jsa_.band_half_width());
  }

  static void check_grid(const OpticalSetup& setup, const FrequencyGrid& grid) {
    const double filter_center = setup.filter_center_detuning();
    const double sigma = filter_sigma(setup.filter);
    if (std::abs(filter_center) + 4.0 * sigma > grid.span * (1.0 + 1e-12))
      throw ConfigError("FrequencyGrid: span must cover the filter center +- 4 filter standard deviations");
    if (setup.etalon.enabled) {
      const double fsr = units::kTwoPi / setup.etalon.round_trip_time_ps;
      if (grid.spacing() > fsr / 8.0) {
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "FrequencyGrid: spacing %.4g rad/ps does not resolve the etalon comb (FSR/8 = %.4g rad/ps)",
                      grid.spacing(), fsr / 8.0);
        throw ResolutionError(buf);
      }
    }
  }

  FrequencyGrid grid_;
  Fault fault_;
  JointSpectralAmplitude jsa_;
  std::vector<double> nodes_;
  std::vector<Complex> cross_;
  double scale_ = 0.0;
  double baseline_ = 0.0;
  double delay_offset_ = 0.0;
};

/// First (tau-independent) term of the rate integral.
inline double baseline_rate(const OpticalSetup& setup, const FrequencyGrid& grid, const EngineOptions& options = {}) {
  return SpectralIntegrand(setup, grid, options).baseline();
}

/// Real part of the second term at one delay, after the Hermiticity check.
inline double interference_term(const OpticalSetup& setup, const FrequencyGrid& grid, double tau,
                                const EngineOptions& options = {}) {
  SpectralIntegrand integrand(setup, grid, options);
  const Complex v = integrand.interference(tau);
  integrand.check_hermitian(tau, v);
  return v.real();
}

inline double coincidence_rate(const OpticalSetup& setup, const FrequencyGrid& grid, double tau,
                               const EngineOptions& options = {}) {
  SpectralIntegrand integrand(setup, grid, options);
  return integrand.rate_from_interference(tau, integrand.interference(tau));
}

namespace detail {

inline CoincidenceTrace make_trace(const SpectralIntegrand& integrand, const DelaySweep& sweep,
                                   const std::vector<Complex>& interference, EnginePath path) {
  CoincidenceTrace trace;
  trace.grid = integrand.grid();
  trace.path = path;
  trace.baseline_rate = integrand.baseline();
  trace.samples.resize(static_cast<std::size_t>(sweep.steps));
  for (int i = 0; i < sweep.steps; ++i) {
    const double tau = sweep.tau(i);
    const Complex v = interference[static_cast<std::size_t>(i)];
    trace.max_imaginary_residue = std::max(trace.max_imaginary_residue, std::abs(v.imag()) / integrand.baseline());
    const double rate = integrand.rate_from_interference(tau, v);
    trace.samples[static_cast<std::size_t>(i)] = {tau, rate, rate / integrand.baseline()};
  }
  return trace;
}

inline std::vector<Complex> direct_interference(const SpectralIntegrand& integrand, const DelaySweep& sweep,
                                                int workers) {
  std::vector<Complex> values(static_cast<std::size_t>(sweep.steps));
  parallel_for(values.size(), workers,
               [&](std::size_t i) { values[i] = integrand.interference(sweep.tau(static_cast<int>(i))); });
  return values;
}

inline std::vector<Complex> fft_interference(const SpectralIntegrand& integrand, const DelaySweep& sweep) {
  const auto profile = integrand.anti_diagonal_profile();
  const int N = integrand.grid().points_per_axis;
  const double h = integrand.grid().spacing();
  auto values = chirp_z(profile, -(N - 1) * h, h, sweep.start_ps + integrand.delay_offset(), sweep.step(),
                        static_cast<std::size_t>(sweep.steps));
  if (integrand.fault() == Fault::PerturbFftPath)
    for (auto& v : values) v += 1e-3 * integrand.baseline();
  return values;
}

}  // namespace detail

/// Evaluates the rate at every delay of the sweep by direct 2D summation.
inline CoincidenceTrace sweep_direct(const OpticalSetup& setup, const FrequencyGrid& grid, const DelaySweep& sweep,
                                     const EngineOptions& options = {}) {
  sweep.validate();
  SpectralIntegrand integrand(setup, grid, options);
  return detail::make_trace(integrand, sweep, detail::direct_interference(integrand, sweep, options.workers),
                            EnginePath::Direct);
}

/// Collapses the cross integrand onto the anti-diagonal profile h(u) and
/// evaluates its Fourier transform at all sweep delays with a chirp-z
/// transform. A few delays are re-evaluated directly; on disagreement beyond
/// kFftAgreementTolerance the whole sweep falls back to direct summation and
/// the trace carries a warning.
inline CoincidenceTrace sweep_fft(const OpticalSetup& setup, const FrequencyGrid& grid, const DelaySweep& sweep,
                                  const EngineOptions& options = {}) {
  sweep.validate();
  SpectralIntegrand integrand(setup, grid, options);
  const auto values = detail::fft_interference(integrand, sweep);

  std::size_t strongest = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (std::abs(values[i].real()) > std::abs(values[strongest].real())) strongest = i;
  double worst = 0.0;
  for (std::size_t i : {std::size_t{0}, values.size() - 1, strongest}) {
    const Complex direct = integrand.interference(sweep.tau(static_cast<int>(i)));
    worst = std::max(worst, std::abs(direct.real() - values[i].real()) / integrand.baseline());
  }
  if (worst > kFftAgreementTolerance) {
    auto trace = detail::make_trace(integrand, sweep, detail::direct_interference(integrand, sweep, options.workers),
                                    EnginePath::Direct);
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "fft path disagreed with direct quadrature by %.3e x baseline (tolerance %.1e); fell back to direct",
                  worst, kFftAgreementTolerance);
    trace.warnings.emplace_back(buf);
    return trace;
  }
  return detail::make_trace(integrand, sweep, values, EnginePath::Fft);
}

inline CoincidenceTrace sweep(const OpticalSetup& setup, const FrequencyGrid& grid, const DelaySweep& delays,
                              EnginePath path, const EngineOptions& options = {}) {
  return path == EnginePath::Direct ? sweep_direct(setup, grid, delays, options)
                                    : sweep_fft(setup, grid, delays, options);
}

/// sup_i |a_i - b_i| over normalized rates of two traces on the same sweep.
inline double sup_norm_delta(const CoincidenceTrace& a, const CoincidenceTrace& b) {
  double d = 0.0;
  const std::size_t n = std::min(a.samples.size(), b.samples.size());
  for (std::size_t i = 0; i < n; ++i)
    d = std::max(d, std::abs(a.samples[i].normalized_rate - b.samples[i].normalized_rate));
  return d;
}

struct ConvergenceReport {
  FrequencyGrid base_grid;
  FrequencyGrid refined_grid;  ///< twice the points, same span
  FrequencyGrid widened_grid;  ///< 1.5x the span at the same spacing
  double refinement_delta = 0.0;
  double widening_delta = 0.0;
  double tolerance = kConvergenceTolerance;
  bool passed = false;
  std::string failure;
};

/// Re-runs the sweep on a refined and a widened grid and compares normalized
/// traces. Errors on any of the grids are reported as a failure.
inline ConvergenceReport convergence_report(const OpticalSetup& setup, const DelaySweep& delays,
                                            const FrequencyGrid& grid, EnginePath path = EnginePath::Fft,
                                            const EngineOptions& options = {}) {
  ConvergenceReport report;
  report.base_grid = grid;
  report.refined_grid = {grid.points_per_axis * 2, grid.span};
  const int widened_points = 2 * static_cast<int>(std::lround(0.75 * grid.points_per_axis));
  report.widened_grid = {widened_points, grid.span * widened_points / grid.points_per_axis};
  try {
    const auto base = sweep(setup, grid, delays, path, options);
    const auto refined = sweep(setup, report.refined_grid, delays, path, options);
    const auto widened = sweep(setup, report.widened_grid, delays, path, options);
    report.refinement_delta = sup_norm_delta(base, refined);
    report.widening_delta = sup_norm_delta(base, widened);
    report.passed = report.refinement_delta < report.tolerance && report.widening_delta < report.tolerance;
    if (!report.passed) report.failure = "normalized trace not converged";
  } catch (const std::exception& e) {
    report.passed = false;
    report.failure = e.what();
  }
  return report;
}

}  // namespace homsim
