#include <gtest/gtest.h>

#include <algorithm>

#include "homsim/verify.hpp"

using namespace homsim;

namespace {

const CheckResult& find(const std::vector<CheckResult>& checks, const std::string& name) {
  const auto it = std::find_if(checks.begin(), checks.end(), [&](const CheckResult& c) { return c.name == name; });
  if (it == checks.end()) throw std::runtime_error("no check named " + name);
  return *it;
}

}  // namespace

TEST(Verify, CleanEngineRestrictedToHom) {
  VerifyOptions opts;
  opts.presets = {"hom"};
  const auto checks = run_verify(opts);
  for (const auto& c : checks) EXPECT_TRUE(c.passed) << format_check(c);
  EXPECT_NO_THROW(find(checks, "fft_vs_direct.hom"));
  EXPECT_NO_THROW(find(checks, "cross_model.dphi=pi/2"));
}

TEST(Verify, FlippedCrossTermIsCaught) {
  VerifyOptions opts;
  opts.presets = {"hom"};
  opts.engine.fault = Fault::FlipCrossTermSign;
  const auto checks = run_verify(opts);
  EXPECT_FALSE(find(checks, "hom.closed_form").passed);
}

TEST(Verify, AbsoluteCombPhaseIsCaught) {
  EngineOptions engine;
  engine.fault = Fault::AbsoluteCombPhase;
  EXPECT_FALSE(cross_model_check(units::kPi, "dphi=pi", engine).passed);
}

TEST(Verify, PerturbedFftPathIsCaught) {
  VerifyOptions opts;
  opts.presets = {"fig3b"};
  opts.engine.fault = Fault::PerturbFftPath;
  const auto checks = run_verify(opts);
  const auto& c = find(checks, "fft_vs_direct.fig3b");
  EXPECT_FALSE(c.passed);
  EXPECT_NE(c.detail.find("fell back"), std::string::npos);
}

TEST(Verify, FormatCheckLine) {
  const CheckResult c{"etalon.fsr_ghz", true, 1500.0, 1498.96, 7.5, {}};
  const std::string line = format_check(c);
  EXPECT_EQ(line.rfind("[PASS] etalon.fsr_ghz", 0), 0u);
  EXPECT_NE(line.find("1498.96"), std::string::npos);
}
