// Command-line driver: sweep / predict / verify.
//
// Exit codes: 0 success, 1 validation or config error, 2 numerical-consistency
// failure, 3 I/O error.

#include <cstdio>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "homsim/app.hpp"
#include "homsim/config.hpp"
#include "homsim/errors.hpp"
#include "homsim/verify.hpp"

namespace {

enum ExitCode { kOk = 0, kConfig = 1, kNumerical = 2, kIo = 3 };

double parse_angle(const std::string& text, const char* flag) {
  const auto v = homsim::parse_number(text);
  if (!v) throw homsim::ConfigError(std::string(flag) + ": not a number: '" + text + "'");
  return *v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coincidence-rate simulator for a Hong-Ou-Mandel interferometer with an etalon in the signal arm"};
  app.require_subcommand(1);

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "compute a coincidence trace R_c(tau)");
  std::string config_path, preset, out_path, format, engine;
  std::optional<double> tau_start, tau_end, span_sigma;
  std::optional<int> steps, grid_points, workers;
  sweep_cmd->add_option("--config", config_path, "key = value configuration file");
  sweep_cmd->add_option("--preset", preset, "fig3a | fig3b | fig3c | hom");
  sweep_cmd->add_option("--tau-start", tau_start, "first delay (ps)");
  sweep_cmd->add_option("--tau-end", tau_end, "last delay (ps)");
  sweep_cmd->add_option("--steps", steps, "number of delays");
  sweep_cmd->add_option("--grid", grid_points, "frequency points per axis");
  sweep_cmd->add_option("--span-sigma", span_sigma, "grid half-width in filter standard deviations");
  sweep_cmd->add_option("--engine", engine, "direct | fft | both");
  sweep_cmd->add_option("--out", out_path, "output file");
  sweep_cmd->add_option("--format", format, "csv | json");
  sweep_cmd->add_option("--workers", workers, "worker threads");

  // predict
  auto* predict_cmd = app.add_subcommand("predict", "comb-state dip/peak/flat predictions at tau_j = j T / 2");
  std::string predict_preset, phase_text, coherence_text;
  std::optional<double> reflectivity, round_trip;
  bool equal_weights = false;
  int j_max = 6;
  predict_cmd->add_option("--preset", predict_preset, "take phase, reflectivity, round trip and coherence from a preset");
  predict_cmd->add_option("--phase", phase_text, "inter-pulse phase in rad (accepts pi, pi/2, 0.5*pi, ...)");
  predict_cmd->add_option("--reflectivity", reflectivity, "mirror reflectivity; path weights decay as R^m");
  predict_cmd->add_flag("--equal-weights", equal_weights, "ignore amplitude decay between round trips");
  predict_cmd->add_option("--coherence", coherence_text, "pump coherence time in ps, or 'inf'");
  predict_cmd->add_option("--round-trip", round_trip, "etalon round-trip time (ps)");
  predict_cmd->add_option("--j-max", j_max, "largest delay index");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "run the oracle suite");
  int verify_workers = 1;
  verify_cmd->add_option("--workers", verify_workers, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (*sweep_cmd) {
      homsim::RunConfig cfg;
      if (!config_path.empty() && !preset.empty())
        throw homsim::ConfigError("give either --config or --preset, not both");
      if (!config_path.empty()) cfg = homsim::load_config(config_path);
      else if (!preset.empty()) cfg = homsim::preset_config(preset);
      else throw homsim::ConfigError("sweep needs --preset or --config");
      if (tau_start) cfg.sweep.start_ps = *tau_start;
      if (tau_end) cfg.sweep.end_ps = *tau_end;
      if (steps) cfg.sweep.steps = *steps;
      if (grid_points) cfg.grid_points = *grid_points;
      if (span_sigma) cfg.span_sigma = *span_sigma;
      if (!engine.empty()) cfg.engine = homsim::parse_engine(engine);
      if (!format.empty()) cfg.format = homsim::parse_output_format(format);
      if (!out_path.empty()) cfg.output_path = out_path;
      if (workers) cfg.workers = *workers;
      cfg.validate();

      const auto result = homsim::run_sweep(cfg);
      std::fprintf(stderr, "wrote %zu samples to %s (engine %s, baseline %.6e)\n", result.trace.samples.size(),
                   cfg.output_path.c_str(), homsim::to_string(result.trace.path), result.trace.baseline_rate);
      for (const auto& w : result.metadata["warnings"]) std::fprintf(stderr, "warning: %s\n", w.get<std::string>().c_str());
      return kOk;
    }

    if (*predict_cmd) {
      homsim::PredictParams p;
      if (!predict_preset.empty()) {
        const auto pre = homsim::make_preset(predict_preset);
        if (!pre.setup.etalon.enabled) throw homsim::ConfigError("preset '" + predict_preset + "' has no etalon");
        p.delta_phi = pre.setup.etalon.tune_phase_rad;
        p.weights = homsim::SchemeWeights::decaying(pre.setup.etalon.reflectivity);
        p.round_trip_time_ps = pre.setup.etalon.round_trip_time_ps;
        p.coherence_time_ps = homsim::pump_coherence_time(pre.setup.pump);
      }
      if (!phase_text.empty()) p.delta_phi = parse_angle(phase_text, "--phase");
      if (reflectivity) p.weights = homsim::SchemeWeights::decaying(*reflectivity);
      if (equal_weights) p.weights = homsim::SchemeWeights::equal_weights();
      if (!coherence_text.empty())
        p.coherence_time_ps = coherence_text == "inf" ? std::numeric_limits<double>::infinity()
                                                      : parse_angle(coherence_text, "--coherence");
      if (round_trip) p.round_trip_time_ps = *round_trip;
      p.j_max = j_max;
      std::fputs(homsim::run_predict(p).c_str(), stdout);
      return kOk;
    }

    if (*verify_cmd) {
      homsim::VerifyOptions opts;
      opts.engine.workers = verify_workers;
      int failures = 0;
      for (const auto& c : homsim::run_verify(opts)) {
        std::puts(homsim::format_check(c).c_str());
        if (!c.passed) ++failures;
      }
      std::printf("%d check(s) failed\n", failures);
      return failures == 0 ? kOk : kNumerical;
    }
  } catch (const homsim::IoError& e) {
    std::fprintf(stderr, "I/O error: %s\n", e.what());
    return kIo;
  } catch (const homsim::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfig;
  } catch (const homsim::NumericalConsistencyError& e) {
    std::fprintf(stderr, "numerical consistency error: %s\n", e.what());
    return kNumerical;
  }
  return kOk;
}
