#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "viscowave/dispersion.hpp"
#include "viscowave/fit.hpp"
#include "viscowave/nnls.hpp"
#include "viscowave/polynomial.hpp"

using namespace viscowave;

TEST(Polynomial, ArithmeticAndRoots) {
  const Poly a{-2.0, 1.0};  // p - 2
  const Poly b{3.0, 1.0};   // p + 3
  const Poly c = poly_mul(a, b);
  EXPECT_EQ(c, (Poly{-6.0, 1.0, 1.0}));
  const auto r = poly_roots(c);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(r[0].real(), -3.0, 1e-14);
  EXPECT_NEAR(r[1].real(), 2.0, 1e-14);
  const auto t = poly_taylor(c, 1.0);  // c(1 + h) = -4 + 3h + h^2
  EXPECT_NEAR(t[0].real(), -4.0, 1e-14);
  EXPECT_NEAR(t[1].real(), 3.0, 1e-14);
  EXPECT_NEAR(t[2].real(), 1.0, 1e-14);
  const auto cr = poly_roots(Poly{1.0, 0.0, 1.0});
  EXPECT_NEAR(std::abs(cr[0].imag()), 1.0, 1e-14);
}

TEST(Nnls, ActiveConstraint) {
  Eigen::MatrixXd A(3, 2);
  A << 1, 0, 0, 1, 1, 1;
  Eigen::VectorXd b(3);
  b << 1, -1, 0;
  const auto r = nnls(A, b);
  EXPECT_GE(r.x(0), 0.0);
  EXPECT_EQ(r.x(1), 0.0);
  EXPECT_NEAR(r.x(0), 0.5, 1e-14);
}

std::vector<double> synth(const std::vector<Atom>& nu, const std::vector<double>& w) {
  std::vector<double> a;
  for (double x : w) {
    double s = 0.0;
    for (const auto& at : nu) s += at.weight * x * x / (at.location * at.location + x * x);
    a.push_back(s);
  }
  return a;
}

TEST(FitAtoms, TwoAtomRoundtrip) {
  const std::vector<Atom> nu{{1.0, 1.0}, {10.0, 2.0}};
  AttenuationSamples s;
  s.omega = make_frequency_grid(1e-2, 1e3, 50, true).omega;
  s.attenuation = synth(nu, s.omega);
  std::vector<double> cand = {0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0};
  const auto f = fit_atoms(s, cand);
  ASSERT_EQ(f.spectrum.atoms.size(), 2u);
  EXPECT_NEAR(f.spectrum.atoms[0].weight, 1.0, 1e-6);
  EXPECT_NEAR(f.spectrum.atoms[1].weight, 2.0, 1e-6);
}

TEST(FitAtoms, ZeroSamples) {
  AttenuationSamples s;
  s.omega = {0.1, 1.0, 10.0};
  s.attenuation = {0.0, 0.0, 0.0};
  const auto f = fit_atoms(s, {1.0, 10.0});
  EXPECT_TRUE(f.spectrum.atoms.empty());
  EXPECT_EQ(f.residual_norm, 0.0);
}

TEST(FitAtoms, PowerLawSamplesAreWellApproximated) {
  AttenuationSamples s;
  s.omega = make_frequency_grid(1e-2, 1e2, 100, true).omega;
  for (double w : s.omega) s.attenuation.push_back(attenuation(PowerLaw{1.0, 0.5}, w));
  const auto cand = make_frequency_grid(1e-4, 1e4, 32, true).omega;
  const auto f = fit_atoms(s, cand);
  EXPECT_LT(f.residual_norm, 1e-3 * f.sample_norm);
}

TEST(FitAtoms, WeightsAndErrors) {
  AttenuationSamples s;
  s.omega = {1.0, 2.0};
  s.attenuation = {0.5, 0.8};
  s.weight = {1.0, 4.0};
  EXPECT_NO_THROW(fit_atoms(s, {1.0}));
  EXPECT_THROW(fit_atoms(s, {}), InvalidArgument);
  EXPECT_THROW(fit_atoms(s, {1.0, 1.0}), NumericError);
  s.omega = {2.0, 1.0};
  EXPECT_THROW(fit_atoms(s, {1.0}), InvalidArgument);
  AttenuationSamples empty;
  EXPECT_THROW(fit_atoms(empty, {1.0}), InvalidArgument);
}

TEST(AttenuationToRelaxation, Elastic) {
  const auto c = attenuation_to_relaxation({}, 2.0, 3.0);
  EXPECT_TRUE(c.atomic);
  EXPECT_TRUE(c.relaxation.atoms.empty());
  EXPECT_NEAR(c.relaxation.mu0, 18.0, 1e-12);
}

TEST(AttenuationToRelaxation, SingleAtomGivesDoublePole) {
  const auto c = attenuation_to_relaxation({{1.0, 1.0}}, 1.0, 1.0);
  EXPECT_FALSE(c.atomic);
  EXPECT_NEAR(c.q_inf, 1.0, 1e-15);
  ASSERT_EQ(c.poles.size(), 1u);
  EXPECT_EQ(c.poles[0].multiplicity, 2);
  EXPECT_NEAR(c.poles[0].s.real(), 2.0, 1e-10);
  EXPECT_NEAR(c.poles[0].coefficients[0].real(), -2.0, 1e-8);
  EXPECT_NEAR(c.poles[0].coefficients[1].real(), 1.0, 1e-8);
}

TEST(AttenuationToRelaxation, ObstructionIsStructural) {
  const auto c = attenuation_to_relaxation({{1.0, 1e-6}}, 1.0, 1.0);
  EXPECT_FALSE(c.atomic);
  ASSERT_EQ(c.poles.size(), 1u);
  EXPECT_EQ(c.poles[0].multiplicity, 2);
  EXPECT_NEAR(c.poles[0].s.real(), 1.0 + 1e-6, 1e-12);
}

TEST(AttenuationToRelaxation, ExpansionReproducesQ) {
  const std::vector<Atom> nu{{0.5, 2.0}, {20.0, 0.7}, {3.0, 0.1}};
  const auto c = attenuation_to_relaxation(nu, 1.3, 0.8);
  const MaterialModel m{1.3, 0.8, MeasureBacked{SpectralMeasure{nu, std::nullopt}}, std::nullopt, 0.0};
  for (double p : {0.01, 0.7, 5.0, 300.0}) {
    std::complex<double> q = c.q_inf;
    for (const auto& pt : c.poles)
      for (int j = 1; j <= pt.multiplicity; ++j)
        q += pt.coefficients[j - 1] / std::pow(std::complex<double>(p) + pt.s, j);
    EXPECT_NEAR(std::abs(q - eval_Q(m, p)) / std::abs(eval_Q(m, p)), 0.0, 1e-9);
  }
}

TEST(RelaxationToAttenuation, Elastic) {
  RationalSpectrum mu;
  mu.side = SpectrumSide::relaxation;
  mu.mu0 = 1.0;
  const auto r = relaxation_to_attenuation(mu, 1.0, detail::log_grid(1e-3, 1e3, 5));
  EXPECT_DOUBLE_EQ(r.c0, 1.0);
  for (double v : r.nu.density) EXPECT_EQ(v, 0.0);
}

TEST(RelaxationToAttenuation, SingleAtomRoundtrip) {
  RationalSpectrum mu;
  mu.side = SpectrumSide::relaxation;
  mu.atoms = {{1.0, 1.0}};
  const auto r = relaxation_to_attenuation(mu, 1.0, default_r_grid(mu));
  EXPECT_NEAR(r.c0, 1.0, 1e-15);
  // Support in (0, 1).
  for (std::size_t i = 0; i < r.nu.r.size(); ++i)
    if (r.nu.r[i] > 1.01) EXPECT_LT(r.nu.density[i], 1e-3 * r.nu.density[0]);
  const SpectralMeasure nu{{}, r.nu.table()};
  EXPECT_TRUE(growth_check(nu).finite);
  const MaterialModel back{1.0, r.c0, MeasureBacked{nu}, std::nullopt, 0.0};
  for (double p : detail::log_grid(1e-2, 1e2, 2)) {
    const double q = p / (p + 1.0);
    EXPECT_NEAR(eval_Q(back, p).real(), q, 1e-4 * q) << "p=" << p;
  }
}

TEST(RelaxationToAttenuation, PowerLawModel) {
  const auto m = power_law_model(1.0, 1.0, 1.0, 0.5);
  const std::vector<double> r = {0.01, 0.1, 1.0, 10.0, 100.0};
  const auto rec = relaxation_to_attenuation(m, r);
  for (std::size_t i = 0; i < r.size(); ++i)
    EXPECT_NEAR(rec.nu.density[i], std::pow(r[i], -0.5) / std::numbers::pi,
                1e-6 * std::pow(r[i], -0.5));
}

TEST(RecoverDensity, SpecExamples) {
  const auto d = recover_density(PowerLaw{1.0, 0.5}, {1.0});
  EXPECT_NEAR(d.density[0], 1.0 / std::numbers::pi, 1e-8);
  const auto z = recover_density(MeasureBacked{}, {0.5, 1.0, 2.0});
  for (double v : z.density) EXPECT_EQ(v, 0.0);
}

TEST(RecoverDensity, AtomWeightIsRecovered) {
  const AttenuationLaw law = MeasureBacked{SpectralMeasure{{{1.0, 1.0}}, std::nullopt}};
  std::vector<double> r;
  for (int i = 0; i <= 60000; ++i) r.push_back(0.5 + 1.5 * i / 60000.0);
  const auto d = recover_density(law, r);
  double mass = 0.0;
  for (std::size_t i = 1; i < r.size(); ++i)
    mass += 0.5 * (d.density[i] + d.density[i - 1]) * (r[i] - r[i - 1]);
  EXPECT_NEAR(mass, 1.0, 1e-3);
}

TEST(RecoverDensity, RejectsInadmissibleLaw) {
  EXPECT_THROW(recover_density(PowerLaw{1.0, 2.0}, {1.0}), InvalidArgument);
  EXPECT_THROW(recover_density(PowerLaw{1.0, 0.5}, {}), InvalidArgument);
}

TEST(SmearedDensity, LorentzianOfAtom) {
  const AttenuationLaw law = MeasureBacked{SpectralMeasure{{{1.0, 1.0}}, std::nullopt}};
  EXPECT_NEAR(smeared_density(law, 1.0, 1e-3), 1.0 / (std::numbers::pi * 1e-3), 1.0);
}
