#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "homsim/coincidence_engine.hpp"
#include "homsim/feynman_model.hpp"
#include "homsim/oracles.hpp"
#include "homsim/presets.hpp"

namespace homsim {

struct CheckResult {
  std::string name;
  bool passed = false;
  double expected = 0.0;
  double actual = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

inline std::string format_check(const CheckResult& c) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "[%s] %-28s expected %.9g  actual %.9g  tolerance %.3g%s%s", c.passed ? "PASS" : "FAIL",
                c.name.c_str(), c.expected, c.actual, c.tolerance, c.detail.empty() ? "" : "  ", c.detail.c_str());
  return buf;
}

struct VerifyOptions {
  EngineOptions engine;
  /// Restrict preset-based checks to these presets (all when empty).
  std::vector<std::string> presets;
};

namespace detail {

inline CheckResult run_check(const std::string& name, double expected, double tolerance,
                             const std::function<double(std::string&)>& actual,
                             const std::function<bool(double)>& accept) {
  CheckResult c{name, false, expected, 0.0, tolerance, {}};
  try {
    c.actual = actual(c.detail);
    c.passed = accept(c.actual);
  } catch (const std::exception& e) {
    c.detail = std::string("error: ") + e.what();
    c.actual = std::nan("");
  }
  return c;
}

}  // namespace detail

/// Engine features at tau_j = j T / 2 for the high-reflectivity reference setup
/// compared with the comb model's dip/peak/flat classification.
inline CheckResult cross_model_check(double delta_phi, const std::string& label, const EngineOptions& options,
                                     int j_max = 6) {
  return detail::run_check(
      "cross_model." + label, 0.0, 0.05,
      [&](std::string& detail) {
        OpticalSetup setup = oracles::high_r_reference_setup();
        setup.etalon.tune_phase_rad = units::wrapPhase(delta_phi);
        const SpectralIntegrand integrand(setup, oracles::high_r_reference_grid(), options);
        const double T = setup.etalon.round_trip_time_ps;
        const double tc = pump_coherence_time(setup.pump);
        double mismatches = 0.0;
        for (int j = 0; j <= j_max; ++j) {
          const double tau = 0.5 * j * T;
          const double normalized =
              integrand.rate_from_interference(tau, integrand.interference(tau)) / integrand.baseline();
          const auto prediction =
              relative_rate(j, delta_phi, SchemeWeights::decaying(setup.etalon.reflectivity), tc, T);
          bool ok = false;
          switch (prediction.classification) {
            case FeatureKind::Dip: ok = normalized < 1.0; break;
            case FeatureKind::Peak: ok = normalized > 1.0; break;
            case FeatureKind::Flat: ok = std::abs(normalized - 1.0) < 0.05; break;
          }
          char buf[96];
          std::snprintf(buf, sizeof buf, "%sj=%d:%s/%.4f", j ? " " : "", j, to_string(prediction.classification),
                        normalized);
          detail += buf;
          if (!ok) mismatches += 1.0;
        }
        return mismatches;
      },
      [](double mismatches) { return mismatches == 0.0; });
}

/// The oracle suite behind `homsim verify`.
inline std::vector<CheckResult> run_verify(const VerifyOptions& opts = {}) {
  std::vector<CheckResult> checks;
  const auto& engine = opts.engine;
  const std::vector<std::string> presets = opts.presets.empty() ? preset_names() : opts.presets;
  const EtalonSpec experimental = experimental_setup(0.0).etalon;

  checks.push_back(detail::run_check(
      "etalon.fsr_ghz", 1500.0, 0.005 * 1500.0,
      [&](std::string&) { return 1000.0 * etalon_from_geometry(100.0, 0.0, 0.9).free_spectral_range_thz(); },
      [](double v) { return std::abs(v - 1500.0) <= 0.005 * 1500.0; }));

  const double antiresonant = (1.0 - 0.9) / (1.0 + 0.9);
  checks.push_back(detail::run_check(
      "etalon.antiresonance", antiresonant, 1e-12,
      [&](std::string&) {
        const double T = experimental.round_trip_time_ps;
        return std::abs(etalon_transfer(units::kPi / T, experimental, 0.0));
      },
      [&](double v) { return std::abs(v - antiresonant) <= 1e-12; }));

  const double geometric = oracles::train_energy(oracles::etalon_impulse_train(experimental, 2000));
  checks.push_back(detail::run_check(
      "etalon.parseval", geometric, 1e-6,
      [&](std::string&) { return oracles::mean_transmission_over_fsr(experimental); },
      [&](double v) { return std::abs(v - geometric) <= 1e-6; }));

  checks.push_back(detail::run_check(
      "hom.closed_form", 0.0, 1e-3,
      [&](std::string& detail) {
        const Preset hom = make_preset("hom");
        const DelaySweep window{-3.0, 3.0, 601};
        const auto trace = sweep_direct(hom.setup, hom.grid, window, engine);
        double worst = 0.0;
        for (const auto& s : trace.samples)
          worst = std::max(worst, std::abs(s.normalized_rate - oracles::hom_closed_form(hom.setup, s.tau_ps)));
        const auto p = oracles::gaussian_hom_params(hom.setup);
        char buf[96];
        std::snprintf(buf, sizeof buf, "sup norm over [-3, 3] ps; V = %.6f, width = %.6f ps", p.visibility, p.width_ps);
        detail = buf;
        return worst;
      },
      [](double v) { return v <= 1e-3; }));

  checks.push_back(detail::run_check(
      "feynman.brute_force", 0.0, 1e-12,
      [&](std::string& detail) {
        double worst = 0.0;
        const double T = experimental.round_trip_time_ps;
        const SchemeWeights weight_sets[] = {SchemeWeights::equal_weights(), SchemeWeights::decaying(0.9),
                                             SchemeWeights::decaying(0.5)};
        for (const double tc : {std::numeric_limits<double>::infinity(), 1.2})
          for (const auto& w : weight_sets)
            for (int j = 0; j <= 8; ++j)
              for (int k = 0; k < 16; ++k) {
                const double dphi = units::kTwoPi * k / 16.0;
                const double model = relative_rate(j, dphi, w, tc, T).relative_rate;
                const double brute = oracles::brute_force_schemes(j, dphi, w, pump_coherence_factor(j, T, tc));
                worst = std::max(worst, std::abs(model - brute));
              }
        detail = "j = 0..8, 16 phases, 3 weight sets, 2 coherence times";
        return worst;
      },
      [](double v) { return v <= 1e-12; }));

  for (const auto& name : presets) {
    checks.push_back(detail::run_check(
        "fft_vs_direct." + name, 0.0, kFftAgreementTolerance,
        [&](std::string& detail) {
          const Preset p = make_preset(name);
          const auto direct = sweep_direct(p.setup, p.grid, p.sweep, engine);
          const auto fft = sweep_fft(p.setup, p.grid, p.sweep, engine);
          if (fft.path != EnginePath::Fft) {
            detail = "fft path fell back to direct";
            return std::numeric_limits<double>::infinity();
          }
          char buf[96];
          std::snprintf(buf, sizeof buf, "max imaginary residue %.2e x baseline",
                        std::max(direct.max_imaginary_residue, fft.max_imaginary_residue));
          detail = buf;
          return sup_norm_delta(direct, fft);
        },
        [](double v) { return v <= kFftAgreementTolerance; }));
  }

  for (const auto& name : presets) {
    checks.push_back(detail::run_check(
        "convergence." + name, 0.0, kConvergenceTolerance,
        [&](std::string& detail) {
          const Preset p = make_preset(name);
          const auto report = convergence_report(p.setup, p.sweep, p.grid, EnginePath::Fft, engine);
          char buf[160];
          std::snprintf(buf, sizeof buf, "refined %.2e, widened %.2e%s%s", report.refinement_delta,
                        report.widening_delta, report.passed ? "" : "; ", report.failure.c_str());
          detail = buf;
          if (!report.passed && report.failure != "normalized trace not converged")
            return std::numeric_limits<double>::infinity();
          return std::max(report.refinement_delta, report.widening_delta);
        },
        [](double v) { return v < kConvergenceTolerance; }));
  }

  checks.push_back(cross_model_check(0.0, "dphi=0", engine));
  checks.push_back(cross_model_check(units::kPi / 2.0, "dphi=pi/2", engine));
  checks.push_back(cross_model_check(units::kPi, "dphi=pi", engine));
  return checks;
}

}  // namespace homsim
