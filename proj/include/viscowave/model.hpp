#pragma once

// Material models: wave operator B(p) = p/c0 + b(p), modulus transform Q(p) = rho p^2/B(p)^2
// (or mu0 + p S[mu](p) when a relaxation spectrum is supplied) and the relaxation modulus G(t).

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

#include "viscowave/bromwich.hpp"
#include "viscowave/error.hpp"
#include "viscowave/law.hpp"
#include "viscowave/measure.hpp"

namespace viscowave {

struct MaterialModel {
  double rho = 1.0;
  double c0 = 1.0;
  /// Dispersion-attenuation law; absent means the elastic (zero) law.
  std::optional<AttenuationLaw> law;
  /// Relaxation spectrum mu on (0, inf) and the equilibrium modulus mu0 = mu({0}).
  std::optional<SpectralMeasure> mu;
  double mu0 = 0.0;

  void validate() const {
    if (!(rho > 0.0) || !std::isfinite(rho)) throw InvalidArgument("model: rho must be > 0");
    if (!(c0 > 0.0) || !std::isfinite(c0)) throw InvalidArgument("model: c0 must be > 0");
    if (law) viscowave::validate(*law);
    if (mu) mu->validate();
    if (!(mu0 >= 0.0) || !std::isfinite(mu0)) throw InvalidArgument("model: mu0 must be >= 0");
  }
};

/// The fractional equation-of-motion medium with modulus A and g(p) = p + a p^alpha:
/// c0 = sqrt(A/rho) and b(p) = (a/c0) p^alpha, so that B(p) = g(p)/c0.
inline MaterialModel power_law_model(double rho, double A, double a, double alpha) {
  if (!(A > 0.0)) throw InvalidArgument("power_law_model: A must be > 0");
  MaterialModel m;
  m.rho = rho;
  m.c0 = std::sqrt(A / rho);
  m.law = PowerLaw{a / m.c0, alpha};
  m.validate();
  return m;
}

/// Elastic modulus rho c0^2 (the high-frequency limit Q(inf)).
inline double elastic_modulus(const MaterialModel& m) { return m.rho * m.c0 * m.c0; }

inline cdouble eval_b(const MaterialModel& m, cdouble p) {
  return m.law ? eval_b(*m.law, p) : cdouble(0.0);
}

/// B(p) = p/c0 + b(p).
inline cdouble eval_B(const MaterialModel& m, cdouble p) { return p / m.c0 + eval_b(m, p); }

/// Q(p) = rho p^2 / B(p)^2, or mu0 + p S[mu](p) when the model carries a relaxation spectrum.
inline cdouble eval_Q(const MaterialModel& m, cdouble p) {
  if (m.mu) {
    if (p.imag() == 0.0 && p.real() <= 0.0)
      throw InvalidArgument("eval_Q: p on the closed negative real axis");
    cdouble q = m.mu0;
    if (!m.mu->empty()) q += p * stieltjes(*m.mu, p);
    return q;
  }
  const cdouble B = eval_B(m, p);
  if (std::abs(B) == 0.0 || !std::isfinite(std::abs(B)))
    throw NumericError("eval_Q: B(p) vanishes or is not finite");
  return m.rho * p * p / (B * B);
}

/// Q from the law route only (ignores mu), for consistency checks.
inline cdouble eval_Q_from_law(const MaterialModel& m, cdouble p) {
  MaterialModel law_only = m;
  law_only.mu.reset();
  return eval_Q(law_only, p);
}

/// Largest relative mismatch of Q(p) B(p)^2 = rho p^2 over log-spaced p in [1e-3, 1e3],
/// for models carrying both a law and a relaxation spectrum.
inline double consistency_defect(const MaterialModel& m) {
  if (!m.mu) return 0.0;
  double worst = 0.0;
  for (int k = -6; k <= 6; ++k) {
    const double p = std::pow(10.0, 0.5 * k);
    const cdouble B = eval_B(m, p);
    const cdouble lhs = eval_Q(m, p) * B * B;
    const double rhs = m.rho * p * p;
    worst = std::max(worst, std::abs(lhs - rhs) / rhs);
  }
  return worst;
}

enum class RelaxationRoute { automatic, measure, bromwich, branch_cut };

struct RelaxationOptions {
  RelaxationRoute route = RelaxationRoute::automatic;
  ContourParams contour;
  double rel_tol = 1e-10;
};

struct RelaxationResult {
  double value = 0.0;
  double error = 0.0;
  RelaxationRoute route = RelaxationRoute::measure;
};

namespace detail {

// G(t) = (1/pi) int_0^inf e^{-s t} Im F(s e^{-i pi}) ds with F = Q/p = rho p / B^2; valid when
// F is analytic off the negative axis and decays at infinity in the cut plane.
inline RelaxationResult relaxation_branch_cut(const MaterialModel& m, double t, double rel_tol) {
  if (!m.law) return {elastic_modulus(m), 0.0, RelaxationRoute::branch_cut};
  const AttenuationLaw& law = *m.law;
  auto g = [&](double u) {
    const double s = std::exp(u);
    const cdouble B = cdouble(-s / m.c0, 0.0) + eval_b_below_cut(law, s);
    const cdouble F = m.rho * cdouble(-s, 0.0) / (B * B);
    return std::exp(-s * t) * F.imag() * s / std::numbers::pi;
  };
  MeasureIntegralOptions opts;
  opts.rel_tol = rel_tol;
  opts.center = 1.0 / t;
  const double c = std::log(opts.center);
  // B(-s) may nearly vanish for moderate s; a dense set of breakpoints resolves the bump.
  std::vector<double> bps;
  for (double u = c - 12.0; u <= c + 6.0; u += 0.5) bps.push_back(u);
  QuadratureOptions q{rel_tol * 1e-2, 0.0, 8000};
  auto core = integrate(g, c - 12.0, c + 6.0, q, bps);
  auto right = integrate_log_tail(g, c + 6.0, +1, opts, std::abs(core.value));
  auto left = integrate_log_tail(g, c - 12.0, -1, opts, std::abs(core.value));
  RelaxationResult out;
  out.value = core.value + right.value + left.value;
  out.error = core.error + right.error + left.error;
  out.route = RelaxationRoute::branch_cut;
  if (!(core.converged && right.converged && left.converged))
    throw AccuracyError("relaxation_modulus: branch-cut quadrature did not converge", out.value,
                        out.error);
  return out;
}

}  // namespace detail

/// Relaxation modulus G(t), t > 0, with error estimate. The measure route sums exponentials
/// over mu; the law routes invert Q(p)/p numerically.
inline RelaxationResult relaxation_modulus_detail(const MaterialModel& m, double t,
                                                  const RelaxationOptions& opts = {}) {
  if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("relaxation_modulus: t must be > 0");
  RelaxationRoute route = opts.route;
  if (route == RelaxationRoute::automatic)
    route = m.mu ? RelaxationRoute::measure : RelaxationRoute::bromwich;

  switch (route) {
    case RelaxationRoute::measure: {
      if (!m.mu) throw InvalidArgument("relaxation_modulus: model has no relaxation spectrum");
      RelaxationResult out{m.mu0, 0.0, route};
      if (!m.mu->empty()) {
        MeasureIntegralOptions mo;
        mo.rel_tol = opts.rel_tol;
        mo.center = 1.0 / t;
        out.value += integrate_measure(*m.mu, [t](double r) { return std::exp(-t * r); }, mo);
      }
      return out;
    }
    case RelaxationRoute::branch_cut:
      return detail::relaxation_branch_cut(m, t, opts.rel_tol);
    default: {
      MaterialModel law_only = m;
      law_only.mu.reset();
      ContourParams cp = opts.contour;
      cp.rel_tol = std::min(cp.rel_tol, opts.rel_tol);
      auto inv = bromwich_invert([&](cdouble p) { return eval_Q(law_only, p) / p; }, t, cp);
      if (!inv.converged)
        throw AccuracyError("relaxation_modulus: Bromwich inversion did not converge", inv.value,
                            inv.error);
      return {inv.value, inv.error, RelaxationRoute::bromwich};
    }
  }
}

inline double relaxation_modulus(const MaterialModel& m, double t,
                                 const RelaxationOptions& opts = {}) {
  return relaxation_modulus_detail(m, t, opts).value;
}

}  // namespace viscowave
