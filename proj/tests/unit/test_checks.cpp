#include <cmath>

#include <gtest/gtest.h>

#include "viscowave/checks.hpp"
#include "viscowave/model.hpp"

using namespace viscowave;

TEST(Admissibility, SpecExamples) {
  EXPECT_TRUE(admissibility_check(PowerLaw{1.0, 0.5}).pass);
  const auto quad = admissibility_check(PowerLaw{1.0, 2.0});
  EXPECT_FALSE(quad.pass);
  EXPECT_FALSE(quad.sublinear.pass);
  EXPECT_TRUE(admissibility_check(ColeType{1.0, 1.0, 0.5}).pass);
}

TEST(Admissibility, MeasureBackedLawsAlwaysPass) {
  const SpectralMeasure atoms{{{0.1, 1.0}, {3.0, 0.5}, {200.0, 2.0}}, std::nullopt};
  EXPECT_TRUE(admissibility_check(MeasureBacked{atoms}).pass);
  EXPECT_TRUE(admissibility_check(MeasureBacked{SpectralMeasure{{}, PowerLawDensity{1.0, 0.3}}}).pass);
  EXPECT_TRUE(admissibility_check(TwoExponent{1.0, 1.0, 0.8, 0.4}).pass);
}

TEST(Admissibility, LogPowerAlphaOneDoesNotVanishAtZero) {
  const auto rep = admissibility_check(LogPower{1.0});
  EXPECT_FALSE(rep.vanishes_at_zero.pass);
  EXPECT_TRUE(rep.upper_half_plane.pass);
  EXPECT_TRUE(admissibility_check(LogPower{0.5}).pass);
}

TEST(Admissibility, SuperlinearTestLawFails) {
  EXPECT_FALSE(admissibility_check(PowerLaw{-1.0, 1.5}).pass);
}

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1);
  return g;
}

TEST(CompleteMonotonicity, Elementary) {
  EXPECT_TRUE(cm_check([](double t) { return std::exp(-t); }, grid(0.1, 4.0, 30)).pass);
  EXPECT_TRUE(cm_check([](double t) { return 1.0 / (1.0 + t); }, grid(0.1, 4.0, 30)).pass);
  const auto v = cm_check([](double t) { return std::cos(t); }, grid(0.2, 3.8, 30));
  EXPECT_FALSE(v.pass);
  ASSERT_TRUE(v.first_violation.has_value());
}

TEST(CompleteMonotonicity, PowerLawRelaxationThreshold) {
  const auto ts = detail::log_grid(0.1, 10.0, 10);
  auto verdict = [&](double alpha) {
    const auto m = power_law_model(1.0, 1.0, 1.0, alpha);
    return cm_check([&](double t) { return relaxation_modulus(m, t); }, ts);
  };
  EXPECT_FALSE(verdict(0.3).pass);
  EXPECT_TRUE(verdict(0.6).pass);
}

TEST(CompleteMonotonicity, RejectsNonPositiveStencil) {
  EXPECT_THROW(cm_check([](double t) { return std::exp(-t); }, {0.0, 1.0}), InvalidArgument);
}
