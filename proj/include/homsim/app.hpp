#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "homsim/coincidence_engine.hpp"
#include "homsim/config.hpp"
#include "homsim/feynman_model.hpp"
#include "homsim/oracles.hpp"
#include "homsim/presets.hpp"
#include "homsim/trace_io.hpp"

namespace homsim {

inline nlohmann::json setup_to_json(const OpticalSetup& s) {
  return {
      {"spdc_center_wavelength_nm", s.spdc_center_wavelength_nm},
      {"pump", {{"center_wavelength_nm", s.pump.center_wavelength_nm}, {"duration_fwhm_ps", s.pump.duration_fwhm_ps}}},
      {"phase_matching",
       {{"model", s.phase_matching.model == PhaseMatchingModel::Flat ? "flat" : "sinc"},
        {"crystal_length_mm", s.phase_matching.crystal_length_mm},
        {"sum_coefficient_ps_per_mm", s.phase_matching.sum_coefficient_ps_per_mm},
        {"difference_coefficient_ps_per_mm", s.phase_matching.difference_coefficient_ps_per_mm}}},
      {"filter", {{"center_wavelength_nm", s.filter.center_wavelength_nm}, {"fwhm_nm", s.filter.fwhm_nm}}},
      {"etalon",
       {{"enabled", s.etalon.enabled},
        {"reflectivity", s.etalon.reflectivity},
        {"round_trip_time_ps", s.etalon.round_trip_time_ps},
        {"tune_phase_rad", s.etalon.tune_phase_rad}}},
  };
}

inline nlohmann::json grid_to_json(const FrequencyGrid& g) {
  return {{"points_per_axis", g.points_per_axis}, {"span_rad_per_ps", g.span}, {"spacing_rad_per_ps", g.spacing()}};
}

struct SweepResult {
  CoincidenceTrace trace;
  nlohmann::json metadata;
};

/// Computes the trace selected by the config plus a convergence summary.
/// Convergence failures and FFT fallbacks are recorded as warnings in the
/// metadata rather than raised.
inline SweepResult compute_sweep(const RunConfig& cfg) {
  cfg.validate();
  const FrequencyGrid grid = cfg.grid();
  const EngineOptions options{cfg.workers, Fault::None};
  SweepResult result;
  auto& meta = result.metadata;
  meta["preset"] = cfg.preset_name.empty() ? nlohmann::json(nullptr) : nlohmann::json(cfg.preset_name);
  meta["setup"] = setup_to_json(cfg.setup);
  meta["grid"] = grid_to_json(grid);
  meta["grid"]["span_filter_sigmas"] = cfg.span_sigma;
  meta["sweep"] = {{"tau_start_ps", cfg.sweep.start_ps}, {"tau_end_ps", cfg.sweep.end_ps}, {"steps", cfg.sweep.steps}};
  meta["engine"] = {{"requested", to_string(cfg.engine)}};
  std::vector<std::string> warnings;

  if (cfg.engine == EngineSelection::Both) {
    result.trace = sweep_direct(cfg.setup, grid, cfg.sweep, options);
    const auto fft = sweep_fft(cfg.setup, grid, cfg.sweep, options);
    meta["engine"]["fft_direct_sup_delta"] = sup_norm_delta(result.trace, fft);
    meta["engine"]["fft_path_used"] = to_string(fft.path);
    warnings.insert(warnings.end(), fft.warnings.begin(), fft.warnings.end());
  } else {
    result.trace = sweep(cfg.setup, grid, cfg.sweep,
                         cfg.engine == EngineSelection::Direct ? EnginePath::Direct : EnginePath::Fft, options);
  }
  meta["engine"]["output_path"] = to_string(result.trace.path);
  warnings.insert(warnings.end(), result.trace.warnings.begin(), result.trace.warnings.end());
  meta["baseline_rate"] = result.trace.baseline_rate;
  meta["max_imaginary_residue"] = result.trace.max_imaginary_residue;

  const auto conv = convergence_report(cfg.setup, cfg.sweep, grid, EnginePath::Fft, options);
  meta["convergence"] = {{"passed", conv.passed},
                         {"path", "fft"},
                         {"refined_grid", grid_to_json(conv.refined_grid)},
                         {"widened_grid", grid_to_json(conv.widened_grid)},
                         {"refinement_delta", conv.refinement_delta},
                         {"widening_delta", conv.widening_delta},
                         {"tolerance", conv.tolerance}};
  if (!conv.passed) warnings.push_back("convergence check failed: " + conv.failure);
  meta["warnings"] = warnings;
  return result;
}

/// Writes the trace (and, for CSV, a `<path>.meta.json` sidecar).
inline SweepResult run_sweep(const RunConfig& cfg) {
  if (cfg.output_path.empty()) throw ConfigError("RunConfig: output path is required");
  SweepResult result = compute_sweep(cfg);
  if (cfg.format == OutputFormat::Csv) {
    write_text_file(cfg.output_path, trace_to_csv(result.trace));
    write_text_file(cfg.output_path + ".meta.json", result.metadata.dump(2) + "\n");
  } else {
    write_text_file(cfg.output_path, trace_to_json(result.trace, result.metadata));
  }
  return result;
}

struct PredictParams {
  double delta_phi = 0.0;
  SchemeWeights weights = SchemeWeights::equal_weights();
  double coherence_time_ps = std::numeric_limits<double>::infinity();
  double round_trip_time_ps = 2.0 * 100.0 / units::kSpeedOfLightUmPerPs;
  int j_max = 6;
};

inline std::string run_predict(const PredictParams& p) {
  const auto rows = predict_trace_skeleton(p.delta_phi, p.weights, p.coherence_time_ps, p.round_trip_time_ps, p.j_max);
  std::string out = "j,tau_ps,relative_rate,classification\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%.6f,%.6f,%s\n", r.j, r.tau_ps, r.relative_rate, to_string(r.classification));
    out += buf;
  }
  return out;
}

}  // namespace homsim
