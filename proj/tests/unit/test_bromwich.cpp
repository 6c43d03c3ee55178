#include <cmath>
#include <complex>
#include <numbers>

#include <gtest/gtest.h>

#include "viscowave/bromwich.hpp"

using namespace viscowave;
using cd = std::complex<double>;

TEST(Bromwich, SimplePole) {
  const auto r = bromwich_invert([](cd p) { return 1.0 / (p + 1.0); }, 1.0);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, std::exp(-1.0), 1e-10);
}

TEST(Bromwich, DoublePoleAtOrigin) {
  const auto r = bromwich_invert([](cd p) { return 1.0 / (p * p); }, 2.0);
  EXPECT_NEAR(r.value, 2.0, 1e-9);
}

TEST(Bromwich, LevySmirnov) {
  const auto r = bromwich_invert([](cd p) { return std::exp(-std::sqrt(p)); }, 1.0);
  const double exact = std::exp(-0.25) / (2.0 * std::sqrt(std::numbers::pi));
  EXPECT_NEAR(r.value, exact, 1e-10);
  EXPECT_NEAR(exact, 0.219696, 1e-6);
}

TEST(Bromwich, ComplementaryErrorFunction) {
  // L^{-1}[e^{-sqrt p}/p](t) = erfc(1/(2 sqrt t)).
  const auto r = bromwich_invert([](cd p) { return std::exp(-std::sqrt(p)) / p; }, 0.5);
  EXPECT_NEAR(r.value, std::erfc(1.0 / (2.0 * std::sqrt(0.5))), 1e-10);
}

TEST(Bromwich, ContourIndependence) {
  auto F = [](cd p) { return 1.0 / (p * p + 1.0); };
  ContourParams a;
  a.shift = 0.5;
  ContourParams b;
  b.shift = 3.0;
  const double va = bromwich_invert(F, 2.0, a).value;
  const double vb = bromwich_invert(F, 2.0, b).value;
  EXPECT_NEAR(va, std::sin(2.0), 1e-9);
  EXPECT_NEAR(vb, std::sin(2.0), 1e-9);
}

TEST(Bromwich, NodeDoublingAndSymmetryDiagnostics) {
  ContourParams cp;
  cp.node_doubling = true;
  cp.check_symmetry = true;
  const auto r = bromwich_invert([](cd p) { return 1.0 / (p + 2.0); }, 1.0, cp);
  EXPECT_NEAR(r.value, std::exp(-2.0), 1e-10);
  EXPECT_LT(r.imag_residue, 1e-12);
}

TEST(Bromwich, NegativeTimeOfCausalTransformIsZero) {
  const auto r = bromwich_invert([](cd p) { return 1.0 / (p + 1.0); }, -1.0);
  EXPECT_NEAR(r.value, 0.0, 1e-9);
}
