#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "viscowave/dispersion.hpp"

using namespace viscowave;

const AttenuationLaw kAtom = MeasureBacked{SpectralMeasure{{{1.0, 1.0}}, std::nullopt}};

TEST(Attenuation, SpecExamples) {
  EXPECT_NEAR(attenuation(kAtom, 1.0), 0.5, 1e-14);
  EXPECT_NEAR(attenuation(PowerLaw{1.0, 0.5}, 1.0), std::cos(std::numbers::pi / 4), 1e-14);
  EXPECT_NEAR(attenuation(PowerLaw{1.0, 1.0}, 1.0), 0.0, 1e-14);
}

TEST(Dispersion, SpecExamples) {
  EXPECT_NEAR(dispersion_fn(kAtom, 1.0), 0.5, 1e-14);
  EXPECT_NEAR(dispersion_fn(PowerLaw{1.0, 0.5}, 1.0), std::sin(std::numbers::pi / 4), 1e-14);
  EXPECT_LT(dispersion_fn(PowerLaw{1.0, 0.5}, 1e-12), 1e-5);
  // Parametric form with the Theorem-2 density against the closed form.
  const SpectralMeasure pl{{}, PowerLawDensity{1.0, 0.5}};
  EXPECT_NEAR(dispersion_parametric(pl, 1.0), std::sin(std::numbers::pi / 4), 1e-9);
  EXPECT_NEAR(attenuation_parametric(pl, 1.0), std::cos(std::numbers::pi / 4), 1e-9);
}

TEST(Attenuation, FiniteMassLimit) {
  const SpectralMeasure nu{{{1.0, 0.5}, {10.0, 1.5}}, std::nullopt};
  EXPECT_NEAR(attenuation(MeasureBacked{nu}, 1e8), 2.0, 1e-10);
}

TEST(Parametric, MatchesDirectEvaluationForAtoms) {
  const SpectralMeasure nu{{{0.3, 1.0}, {4.0, 0.2}, {50.0, 3.0}}, std::nullopt};
  const auto g = make_frequency_grid(1e-2, 1e4, 64, true);
  for (double w : g.omega) {
    EXPECT_NEAR(attenuation_parametric(nu, w), attenuation(MeasureBacked{nu}, w),
                1e-10 * std::max(1.0, attenuation(MeasureBacked{nu}, w)));
    EXPECT_NEAR(dispersion_parametric(nu, w), dispersion_fn(MeasureBacked{nu}, w),
                1e-10 * std::max(1.0, dispersion_fn(MeasureBacked{nu}, w)));
  }
}

TEST(PhaseSpeed, SpecExamples) {
  const MaterialModel elastic{1.0, 2.0, std::nullopt, std::nullopt, 0.0};
  EXPECT_NEAR(phase_speed(elastic, 3.7).speed, 2.0, 1e-14);
  const MaterialModel m{1.0, 1.0, PowerLaw{1.0, 0.5}, std::nullopt, 0.0};
  double prev = 0.0;
  for (double w = 1e-3; w <= 1e9; w *= 10.0) {
    const double c = phase_speed(m, w).speed;
    EXPECT_GT(c, prev);
    EXPECT_LT(c, 1.0);
    prev = c;
  }
  EXPECT_GT(prev, 0.999);
  const MaterialModel sup{1.0, 1.0, PowerLaw{-1.0, 1.5}, std::nullopt, 0.0};
  const auto ps = phase_speed(sup, 1.0);
  EXPECT_NEAR(ps.slowness, 1.0 - std::sin(3.0 * std::numbers::pi / 4.0), 1e-14);
  EXPECT_NEAR(ps.speed, 3.414213562373095, 1e-12);
}

TEST(CriticalFrequency, SpecExamples) {
  auto w1 = [](double c0, double a) {
    return critical_frequency(MaterialModel{1.0, c0, PowerLaw{a, 1.5}, std::nullopt, 0.0}).omega;
  };
  EXPECT_NEAR(w1(1.0, -1.0), 2.0, 1e-10);
  EXPECT_NEAR(w1(1.0, -2.0), 0.5, 1e-10);
  EXPECT_NEAR(w1(2.0, -1.0), 0.5, 1e-10);
  EXPECT_THROW(critical_frequency(MaterialModel{1.0, 1.0, PowerLaw{1.0, 0.5}, std::nullopt, 0.0}),
               InvalidArgument);
}

TEST(VariableExponent, SpecExamples) {
  for (double p : {1.5, 10.0, 1e6}) EXPECT_NEAR(variable_exponent(PowerLaw{1.0, 0.5}, p), 0.5, 1e-14);
  EXPECT_NEAR(variable_exponent(TwoExponent{1.0, 1.0, 0.8, 0.4}, 1e12), 0.8, 0.02);
  const ColeType b1{1.0, 1.0, 0.5};
  double prev = -1.0;
  for (double p = 1e2; p <= 1e12; p *= 10.0) {
    const double e = variable_exponent(b1, p);
    EXPECT_LE(e, 0.0);
    EXPECT_GT(e, prev);
    prev = e;
  }
  EXPECT_GT(prev, -1e-4);
  EXPECT_THROW(variable_exponent(PowerLaw{1.0, 0.5}, 0.5), DomainError);
}

TEST(LocalExponent, TwoExponentInterpolatesBetweenBetaAndAlpha) {
  const TwoExponent b2{1.0, 1.0, 0.8, 0.4};
  double prev = 0.0;
  for (double p = 1e-4; p <= 1e6; p *= 10.0) {
    const double e = local_exponent(b2, p);
    EXPECT_GE(e, prev - 1e-9);
    EXPECT_GE(e, 0.4 - 1e-6);
    EXPECT_LE(e, 0.8 + 1e-6);
    prev = e;
  }
}

TEST(FrequencyGrid, Validation) {
  EXPECT_THROW(make_frequency_grid(0.0, 1.0, 10, true), InvalidArgument);
  EXPECT_THROW(make_frequency_grid(2.0, 1.0, 10, false), InvalidArgument);
  EXPECT_EQ(make_frequency_grid(1.0, 2.0, 64, false).omega.size(), 64u);
}
