#include <cmath>
#include <numbers>

#include <boost/math/special_functions/airy.hpp>
#include <gtest/gtest.h>

#include "viscowave/quadrature.hpp"
#include "viscowave/stable.hpp"

using namespace viscowave;

double levy(double z) {
  return std::exp(-1.0 / (4.0 * z)) / (2.0 * std::sqrt(std::numbers::pi) * std::pow(z, 1.5));
}

// P_{2/3}(z) in terms of Airy functions.
double airy_two_thirds(double z) {
  const double c = 1.0 / (3.0 * z);
  const double k = std::cbrt(3.0 * z);
  const double x = c / k;
  const double ai = boost::math::airy_ai(x);
  const double aip = boost::math::airy_ai_prime(x);
  return std::exp(-2.0 * c * c / 3.0) * (3.0 / k) *
         (x * ai / (k * k) - 2.0 * c * aip / k + c * c * ai);
}

TEST(StableDensity, LevySmirnovOracle) {
  EXPECT_NEAR(stable_density(0.5, 1.0), 0.219696, 1e-6);
  for (double z : {0.01, 0.05, 0.3, 1.0, 4.0, 30.0, 1e3, 1e6})
    EXPECT_NEAR(stable_density(0.5, z) / levy(z), 1.0, 1e-10) << "z=" << z;
}

TEST(StableDensity, AiryOracle) {
  for (double z : {0.1, 0.3, 1.0, 2.0, 10.0, 100.0})
    EXPECT_NEAR(stable_density(2.0 / 3.0, z) / airy_two_thirds(z), 1.0, 1e-10) << "z=" << z;
}

TEST(StableDensity, OneSidedSupport) {
  for (double a : {0.2, 0.5, 0.8}) {
    EXPECT_EQ(stable_density(a, -1.0), 0.0);
    EXPECT_EQ(stable_density(a, 0.0), 0.0);
  }
}

TEST(StableDensity, UnderflowIsFlagged) {
  const auto r = stable_density_detail(0.5, 1e-6);
  EXPECT_TRUE(r.underflow);
  EXPECT_EQ(r.value, 0.0);
  EXPECT_NEAR(r.log_value, std::log(levy(1e-6)), 1e-3 * std::abs(std::log(levy(1e-6))));
}

TEST(StableDensity, InvalidAlpha) {
  EXPECT_THROW(stable_density(1.0, 1.0), InvalidArgument);
  EXPECT_THROW(stable_density(0.0, 1.0), InvalidArgument);
}

class Normalization : public ::testing::TestWithParam<double> {};

TEST_P(Normalization, IntegratesToOne) {
  const double alpha = GetParam();
  // Body in u = ln z up to Z, plus the asymptotic series for the tail beyond Z.
  const double Z = 10.0 * std::pow(0.1, -1.0 / alpha);
  auto g = [&](double u) {
    const double z = std::exp(u);
    return stable_density(alpha, z) * z;
  };
  std::vector<double> bps;
  for (double u = -8.0; u < std::log(Z); u += 0.5) bps.push_back(u);
  const auto body = integrate(g, -12.0, std::log(Z), QuadratureOptions{1e-12, 0.0, 4000}, bps);
  double tail = 0.0;
  for (int k = 1; k < 60; ++k) {
    tail += ((k % 2) ? 1.0 : -1.0) * std::exp(std::lgamma(k * alpha + 1.0) - std::lgamma(k + 1.0)) *
            std::sin(k * std::numbers::pi * alpha) * std::pow(Z, -k * alpha) / (k * alpha) /
            std::numbers::pi;
  }
  EXPECT_NEAR(body.value + tail, 1.0, 1e-6);
}

INSTANTIATE_TEST_SUITE_P(Alphas, Normalization, ::testing::Values(0.3, 0.5, 0.7));

TEST(StableDensity, BromwichCrossCheck) {
  for (double a : {0.3, 0.6, 0.9})
    for (double z : {0.5, 1.0, 3.0}) {
      const auto r = stable_density_bromwich(a, z);
      EXPECT_NEAR(r.value, stable_density(a, z), 1e-9 * std::max(1.0, stable_density(a, z)))
          << "alpha=" << a << " z=" << z;
    }
}
