#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "homsim/oracles.hpp"
#include "homsim/presets.hpp"

using namespace homsim;

TEST(HomClosedForm, PinnedParameters) {
  const Preset hom = make_preset("hom");
  const auto p = oracles::gaussian_hom_params(hom.setup);
  EXPECT_EQ(p.visibility, 1.0);
  EXPECT_NEAR(p.width_ps, 0.05461189505335365, 1e-14);
  EXPECT_EQ(oracles::hom_closed_form(hom.setup, 0.0), 0.0);
  EXPECT_NEAR(oracles::hom_closed_form(hom.setup, 1.0), 1.0, 1e-12);
}

TEST(HomClosedForm, WidthIndependentOfPump) {
  OpticalSetup s = make_preset("hom").setup;
  const double w = oracles::gaussian_hom_params(s).width_ps;
  s.pump.duration_fwhm_ps = 20.0;
  EXPECT_EQ(oracles::gaussian_hom_params(s).width_ps, w);
}

TEST(HomClosedForm, UnsupportedConfigurations) {
  EXPECT_THROW(oracles::gaussian_hom_params(experimental_setup(0.0)), ConfigError);
  OpticalSetup s = make_preset("hom").setup;
  s.phase_matching = {PhaseMatchingModel::Sinc, 3.0, 0.1, 0.1};
  EXPECT_THROW(oracles::hom_closed_form(s, 0.0), ConfigError);
}

TEST(ImpulseTrain, ZeroReflectivityIsSinglePulse) {
  const auto train = oracles::etalon_impulse_train(etalon_from_geometry(100.0, 0.0, 0.0), 50);
  ASSERT_EQ(train.size(), 1u);
  EXPECT_EQ(train[0].delay_ps, 0.0);
  EXPECT_EQ(std::abs(train[0].amplitude), 1.0);
}

TEST(ImpulseTrain, GeometricDecayAndEnergy) {
  EtalonSpec e = etalon_from_geometry(100.0, 0.0, 0.9);
  e.tune_phase_rad = 0.4;
  const auto train = oracles::etalon_impulse_train(e, 400);
  EXPECT_NEAR(std::norm(train[1].amplitude) / std::norm(train[0].amplitude), 0.81, 1e-12);
  EXPECT_NEAR(std::arg(train[1].amplitude / train[0].amplitude), 0.4, 1e-12);
  EXPECT_NEAR(train[3].delay_ps, 3.0 * e.round_trip_time_ps, 1e-15);
  EXPECT_NEAR(oracles::train_energy(train), 0.1 / 1.9, 1e-12);
}

TEST(ImpulseTrain, ParsevalAgainstFrequencyDomain) {
  for (double r : {0.0, 0.3, 0.9, 0.98}) {
    EtalonSpec e = etalon_from_geometry(100.0, 0.0, r);
    e.tune_phase_rad = 1.1;
    EXPECT_NEAR(oracles::mean_transmission_over_fsr(e), (1.0 - r) / (1.0 + r), 1e-6) << "R = " << r;
  }
}

TEST(BruteForce, RefusesLargeAndNegativeIndex) {
  const auto w = SchemeWeights::equal_weights();
  EXPECT_THROW(oracles::brute_force_schemes(oracles::kMaxBruteForceIndex + 1, 0.0, w), DomainError);
  EXPECT_THROW(oracles::brute_force_schemes(-1, 0.0, w), DomainError);
  EXPECT_NO_THROW(oracles::brute_force_schemes(oracles::kMaxBruteForceIndex, 0.0, w));
}

TEST(BruteForce, AgreesWithSchemeModel) {
  const double T = etalon_from_geometry(100.0, 0.0, 0.9).round_trip_time_ps;
  const SchemeWeights sets[] = {SchemeWeights::equal_weights(), SchemeWeights::decaying(0.9),
                                SchemeWeights::decaying(0.5)};
  for (const double tc : {std::numeric_limits<double>::infinity(), 1.2, 0.3})
    for (const auto& w : sets)
      for (int j = 0; j <= 8; ++j)
        for (int k = 0; k < 16; ++k) {
          const double dphi = units::kTwoPi * k / 16.0;
          EXPECT_NEAR(relative_rate(j, dphi, w, tc, T).relative_rate,
                      oracles::brute_force_schemes(j, dphi, w, pump_coherence_factor(j, T, tc)), 1e-12);
        }
}

TEST(BruteForce, PinnedValues) {
  const auto w = SchemeWeights::equal_weights();
  EXPECT_NEAR(oracles::brute_force_schemes(2, units::kPi / 2, w), 4.0 / 3.0, 1e-12);
  EXPECT_NEAR(oracles::brute_force_schemes(1, units::kPi, w), 2.0, 1e-12);
  EXPECT_NEAR(oracles::brute_force_schemes(5, 0.0, w), 0.0, 1e-12);
}

TEST(HighRReference, SetupAndGrid) {
  const OpticalSetup s = oracles::high_r_reference_setup();
  EXPECT_EQ(s.etalon.reflectivity, 0.98);
  EXPECT_EQ(s.pump.duration_fwhm_ps, 20.0);
  EXPECT_TRUE(s.etalon.enabled);
  EXPECT_NEAR(pump_coherence_time(s.pump), 16.986436005760381, 1e-9);
  const FrequencyGrid g = oracles::high_r_reference_grid();
  EXPECT_NO_THROW(g.validate());
  EXPECT_LE(g.spacing(), units::kTwoPi / s.etalon.round_trip_time_ps / 8.0);
}
