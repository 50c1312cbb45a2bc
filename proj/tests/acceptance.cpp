// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when all pass).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "homsim/app.hpp"
#include "homsim/config.hpp"
#include "homsim/trace_io.hpp"
#include "homsim/verify.hpp"

using namespace homsim;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) passed = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "NOT ") + what;
  }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

/// Index of the extremum of the normalized trace within +-window of tau,
/// or -1 if it lies on the edge of the window (no local extremum there).
long extremum_near(const CoincidenceTrace& t, double tau, bool minimum, double window = 0.05) {
  long best = -1;
  for (std::size_t i = 0; i < t.samples.size(); ++i) {
    if (std::abs(t.samples[i].tau_ps - tau) > window) continue;
    if (best < 0) { best = static_cast<long>(i); continue; }
    const double v = t.samples[i].normalized_rate, b = t.samples[static_cast<std::size_t>(best)].normalized_rate;
    if (minimum ? v < b : v > b) best = static_cast<long>(i);
  }
  if (best <= 0 || best + 1 >= static_cast<long>(t.samples.size())) return -1;
  const auto& s = t.samples;
  const std::size_t k = static_cast<std::size_t>(best);
  const bool local = minimum ? (s[k].normalized_rate <= s[k - 1].normalized_rate && s[k].normalized_rate <= s[k + 1].normalized_rate)
                             : (s[k].normalized_rate >= s[k - 1].normalized_rate && s[k].normalized_rate >= s[k + 1].normalized_rate);
  if (!local || std::abs(s[k].tau_ps - tau) >= window) return -1;
  return best;
}

double normalized_at(const SpectralIntegrand& in, double tau) {
  return in.rate_from_interference(tau, in.interference(tau)) / in.baseline();
}

Outcome criterion_fig3a() {
  Outcome o;
  const Preset p = make_preset("fig3a");
  const double T = p.setup.etalon.round_trip_time_ps;
  const auto t0 = std::chrono::steady_clock::now();
  const auto trace = sweep_fft(p.setup, p.grid, p.sweep);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::vector<double> depths;
  for (int j = 0; j <= 4; ++j) {
    const long k = extremum_near(trace, 0.5 * j * T, true);
    const bool found = k >= 0 && std::abs(trace.samples[static_cast<std::size_t>(k)].tau_ps - 0.5 * j * T) <= 0.02;
    o.require(found, "minimum within 0.02 ps of tau_" + std::to_string(j));
    depths.push_back(k >= 0 ? 1.0 - trace.samples[static_cast<std::size_t>(k)].normalized_rate : 0.0);
  }
  std::string list = "depths";
  bool decreasing = true;
  for (std::size_t j = 0; j < depths.size(); ++j) {
    list += fmt(" %.4f", depths[j]);
    if (j > 0 && !(depths[j] < depths[j - 1])) decreasing = false;
  }
  o.require(decreasing, list + " strictly decreasing");
  o.require(depths[0] > 0.2, fmt("depth(0) = %.4f > 0.2", depths[0]));
  o.require(seconds < 10.0, fmt("sweep %.2f s < 10 s", seconds));
  return o;
}

Outcome criterion_fig3b() {
  Outcome o;
  const Preset p = make_preset("fig3b");
  const double T = p.setup.etalon.round_trip_time_ps;
  const auto trace = sweep_fft(p.setup, p.grid, p.sweep);
  for (int j = 0; j <= 4; ++j) {
    const bool even = j % 2 == 0;
    const long k = extremum_near(trace, 0.5 * j * T, even);
    bool ok = k >= 0;
    double v = std::nan("");
    if (ok) {
      v = trace.samples[static_cast<std::size_t>(k)].normalized_rate;
      ok = even || v > 1.0;
    }
    o.require(ok, fmt(even ? "minimum at tau_%.0f (%.4f)" : "maximum > 1 at tau_%.0f (%.4f)", j, v));
  }
  return o;
}

Outcome criterion_fig3c() {
  Outcome o;
  const Preset p = make_preset("fig3c");
  const double T = p.setup.etalon.round_trip_time_ps;
  const auto trace = sweep_fft(p.setup, p.grid, p.sweep);
  o.require(extremum_near(trace, 0.0, true) >= 0, "dip at tau_0");
  const SpectralIntegrand in(p.setup, p.grid);
  const double n1 = normalized_at(in, 0.5 * T), n2 = normalized_at(in, T), n3 = normalized_at(in, 1.5 * T);
  o.require(std::abs(n1 - 1.0) < 0.05, fmt("|r(tau_1) - 1| < 0.05 (%.4f)", n1));
  o.require(std::abs(n3 - 1.0) < 0.05, fmt("|r(tau_3) - 1| < 0.05 (%.4f)", n3));
  o.require(n2 > 1.0, fmt("r(tau_2) > 1 (%.4f)", n2));
  return o;
}

Outcome criterion_hom() {
  Outcome o;
  const Preset hom = make_preset("hom");
  const auto trace = sweep_direct(hom.setup, hom.grid, DelaySweep{-3.0, 3.0, 601});
  double worst = 0.0;
  for (const auto& s : trace.samples)
    worst = std::max(worst, std::abs(s.normalized_rate - oracles::hom_closed_form(hom.setup, s.tau_ps)));
  o.require(worst <= 1e-3, fmt("sup |engine - closed form| = %.2e <= 1e-3", worst));
  OpticalSetup long_pump = hom.setup;
  long_pump.pump.duration_fwhm_ps = 20.0;
  const SpectralIntegrand in(long_pump, grid_for(long_pump, kDefaultGridPoints, kDefaultSpanSigma));
  const double r0 = normalized_at(in, 0.0);
  o.require(r0 < 0.05, fmt("20 ps pump: r(0) = %.2e < 0.05", r0));
  return o;
}

Outcome criterion_feynman() {
  Outcome o;
  const double T = etalon_from_geometry(100.0, 0.0, 0.9).round_trip_time_ps;
  const double inf = std::numeric_limits<double>::infinity();
  const SchemeWeights sets[] = {SchemeWeights::equal_weights(), SchemeWeights::decaying(0.9),
                                SchemeWeights::decaying(0.5)};
  double worst = 0.0;
  for (const auto& w : sets)
    for (int j = 0; j <= 8; ++j)
      for (int k = 0; k < 16; ++k) {
        const double dphi = units::kTwoPi * k / 16.0;
        worst = std::max(worst, std::abs(relative_rate(j, dphi, w, inf, T).relative_rate -
                                         oracles::brute_force_schemes(j, dphi, w)));
      }
  o.require(worst <= 1e-12, fmt("max |model - brute force| = %.2e <= 1e-12", worst));
  const auto eq = SchemeWeights::equal_weights();
  const double r2 = relative_rate(2, units::kPi / 2, eq, inf, T).relative_rate;
  const double r1 = relative_rate(1, units::kPi, eq, inf, T).relative_rate;
  o.require(std::abs(r2 - 4.0 / 3.0) <= 1e-12, fmt("r(2, pi/2) = %.12f", r2));
  o.require(std::abs(r1 - 2.0) <= 1e-12, fmt("r(1, pi) = %.12f", r1));
  double zero = 0.0;
  for (int j = 0; j <= 8; ++j) zero = std::max(zero, std::abs(relative_rate(j, 0.0, eq, inf, T).relative_rate));
  o.require(zero <= 1e-12, fmt("max |r(j, 0)| = %.2e", zero));
  return o;
}

Outcome criterion_cross_model() {
  Outcome o;
  for (const auto& [phase, label] : {std::pair{0.0, "dphi=0"}, std::pair{units::kPi / 2, "dphi=pi/2"},
                                     std::pair{units::kPi, "dphi=pi"}}) {
    const auto c = cross_model_check(phase, label, EngineOptions{});
    o.require(c.passed, std::string(label) + " [" + c.detail + "]");
  }
  return o;
}

Outcome criterion_integrity() {
  Outcome o;
  for (const auto& name : preset_names()) {
    const Preset p = make_preset(name);
    const auto direct = sweep_direct(p.setup, p.grid, p.sweep);
    const auto fft = sweep_fft(p.setup, p.grid, p.sweep);
    const double delta = sup_norm_delta(direct, fft);
    o.require(fft.path == EnginePath::Fft && delta <= kFftAgreementTolerance,
              name + fmt(": fft vs direct %.2e", delta));
    const double residue = std::max(direct.max_imaginary_residue, fft.max_imaginary_residue);
    o.require(residue < kConsistencyTolerance, name + fmt(": imaginary residue %.2e x baseline", residue));
    const auto conv = convergence_report(p.setup, p.sweep, p.grid);
    o.require(conv.passed && conv.refinement_delta < 1e-4 && conv.widening_delta < 1e-4,
              name + fmt(": refined %.2e, widened %.2e", conv.refinement_delta, conv.widening_delta));
  }
  return o;
}

Outcome criterion_etalon() {
  Outcome o;
  const EtalonSpec e = etalon_from_geometry(100.0, 0.0, 0.9);
  const double fsr = 1000.0 * e.free_spectral_range_thz();
  o.require(std::abs(fsr - 1500.0) <= 7.5, fmt("FSR %.3f GHz within 0.5%% of 1500", fsr));
  const double anti = std::abs(etalon_transfer(units::kPi / e.round_trip_time_ps, e, 0.0));
  o.require(std::abs(anti - 0.1 / 1.9) <= 1e-12, fmt("|f_e| at anti-resonance %.15f", anti));
  const double mean = oracles::mean_transmission_over_fsr(e);
  const double geometric = oracles::train_energy(oracles::etalon_impulse_train(e, 2000));
  o.require(std::abs(mean - geometric) <= 1e-6, fmt("Parseval |%.9f - %.9f|", mean, geometric));
  return o;
}

Outcome criterion_determinism() {
  Outcome o;
  for (const auto& name : preset_names()) {
    RunConfig a = preset_config(name);
    RunConfig b = a;
    a.workers = 1;
    b.workers = 3;
    const std::string csv_a = trace_to_csv(sweep(a.setup, a.grid(), a.sweep, EnginePath::Fft, {1, Fault::None}));
    const std::string csv_b = trace_to_csv(sweep(b.setup, b.grid(), b.sweep, EnginePath::Fft, {3, Fault::None}));
    const std::string csv_c = trace_to_csv(sweep(a.setup, a.grid(), a.sweep, EnginePath::Fft, {1, Fault::None}));
    o.require(csv_a == csv_b && csv_a == csv_c, name + ": byte-identical CSV for 1 and 3 workers");
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 fig3a dips at jT/2, decreasing depth", criterion_fig3a},
      {"2 fig3b dips at even j, peaks at odd j", criterion_fig3b},
      {"3 fig3c flat at odd j, peak at j=2", criterion_fig3c},
      {"4 HOM closed-form oracle", criterion_hom},
      {"5 Feynman model vs brute force", criterion_feynman},
      {"6 cross-model consistency", criterion_cross_model},
      {"7 numerical integrity", criterion_integrity},
      {"8 etalon element checks", criterion_etalon},
      {"9 determinism", criterion_determinism},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.passed) ++failures;
    std::printf("%s criterion %s: %s\n", o.passed ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures;
}
