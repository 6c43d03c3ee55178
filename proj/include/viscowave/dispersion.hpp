#pragma once

// Frequency-domain observables at p = -i w: attenuation A(w) = Re b(-iw), dispersion
// D(w) = -Im b(-iw), phase slowness Re[i B(-iw)]/w, the superlinear critical frequency and
// the variable attenuation exponent.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "viscowave/error.hpp"
#include "viscowave/law.hpp"
#include "viscowave/measure.hpp"
#include "viscowave/model.hpp"

namespace viscowave {

struct FrequencyGrid {
  std::vector<double> omega;
  bool log_spaced = true;

  void validate() const {
    if (omega.empty()) throw InvalidArgument("frequency grid is empty");
    for (std::size_t i = 0; i < omega.size(); ++i) {
      if (!(omega[i] > 0.0) || !std::isfinite(omega[i]))
        throw InvalidArgument("frequency grid values must be positive and finite");
      if (i > 0 && !(omega[i] > omega[i - 1]))
        throw InvalidArgument("frequency grid must be strictly increasing");
    }
  }
};

inline FrequencyGrid make_frequency_grid(double lo, double hi, int points, bool log_spaced) {
  if (points < 1) throw InvalidArgument("frequency grid needs at least one point");
  if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi))
    throw InvalidArgument("frequency grid needs 0 < omega_min <= omega_max");
  if (points > 1 && hi == lo)
    throw InvalidArgument("frequency grid with several points needs omega_min < omega_max");
  FrequencyGrid g;
  g.log_spaced = log_spaced;
  g.omega.resize(points);
  for (int i = 0; i < points; ++i) {
    const double s = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    g.omega[i] = log_spaced ? lo * std::pow(hi / lo, s) : lo + (hi - lo) * s;
  }
  g.omega.back() = hi;
  g.validate();
  return g;
}

namespace detail {

inline void require_positive_frequency(double w) {
  if (!(w > 0.0) || !std::isfinite(w)) throw InvalidArgument("frequency must be positive");
}

}  // namespace detail

/// A(w) = Re b(-i w).
inline double attenuation(const AttenuationLaw& law, double w) {
  detail::require_positive_frequency(w);
  return eval_b(law, cdouble(0.0, -w)).real();
}

/// D(w) = -Im b(-i w).
inline double dispersion_fn(const AttenuationLaw& law, double w) {
  detail::require_positive_frequency(w);
  return -eval_b(law, cdouble(0.0, -w)).imag();
}

/// Parametric (real-integral) form w^2 int nu(dr)/(r^2 + w^2) of the attenuation.
inline double attenuation_parametric(const SpectralMeasure& nu, double w, double rel_tol = 1e-12) {
  detail::require_positive_frequency(w);
  MeasureIntegralOptions o;
  o.rel_tol = rel_tol;
  o.center = w;
  return integrate_measure(nu, [w](double r) { return w * w / (r * r + w * w); }, o);
}

/// Parametric form w int r nu(dr)/(r^2 + w^2) of the dispersion.
inline double dispersion_parametric(const SpectralMeasure& nu, double w, double rel_tol = 1e-12) {
  detail::require_positive_frequency(w);
  MeasureIntegralOptions o;
  o.rel_tol = rel_tol;
  o.center = w;
  return integrate_measure(nu, [w](double r) { return w * r / (r * r + w * w); }, o);
}

struct PhaseSpeed {
  /// Re[i B(-i w)] / w = 1/c0 + D(w)/w.
  double slowness = 0.0;
  /// 1/slowness, signed; infinite when the slowness vanishes.
  double speed = 0.0;
  /// Set when the slowness is not positive (unphysical superlinear regime).
  bool pathological = false;
};

inline PhaseSpeed phase_speed(const MaterialModel& m, double w) {
  detail::require_positive_frequency(w);
  const cdouble iB = cdouble(0.0, 1.0) * eval_B(m, cdouble(0.0, -w));
  PhaseSpeed out;
  out.slowness = iB.real() / w;
  out.speed = out.slowness == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / out.slowness;
  out.pathological = !(out.slowness > 0.0);
  return out;
}

struct CriticalFrequency {
  /// Root of the slowness found by bisection in ln w.
  double omega = 0.0;
  /// [c0 |a| sin(alpha pi/2)]^(-1/(alpha-1)): the root of 1/c0 + a w^(alpha-1) sin(alpha pi/2).
  double closed_form = 0.0;
  /// [c0 |a| sin(alpha pi/2)]^(1/(alpha-1)): the reciprocal-base expression as printed in the
  /// source analysis, reported for comparison.
  double closed_form_printed = 0.0;
  int iterations = 0;
};

/// Frequency where the phase slowness of a superlinear power law (1 < alpha < 2, a < 0)
/// changes sign. Searches w in [lo, hi].
inline CriticalFrequency critical_frequency(const MaterialModel& m, double lo = 1e-12,
                                            double hi = 1e12) {
  const PowerLaw* pl = m.law ? std::get_if<PowerLaw>(&*m.law) : nullptr;
  if (!pl || !(pl->alpha > 1.0 && pl->alpha < 2.0) || !(pl->a < 0.0))
    throw InvalidArgument("critical_frequency needs a PowerLaw law with 1 < alpha < 2 and a < 0");
  auto slow = [&](double u) { return phase_speed(m, std::exp(u)).slowness; };
  double ua = std::log(lo);
  double ub = std::log(hi);
  double fa = slow(ua);
  const double fb = slow(ub);
  if (!(fa > 0.0 && fb < 0.0))
    throw NumericError("critical_frequency: slowness does not change sign in the search interval");
  CriticalFrequency out;
  while (ub - ua > 1e-15 * std::max(1.0, std::abs(ua)) && out.iterations < 200) {
    const double um = 0.5 * (ua + ub);
    const double fm = slow(um);
    ++out.iterations;
    if (fm == 0.0) {
      ua = ub = um;
      break;
    }
    if ((fm > 0.0) == (fa > 0.0)) {
      ua = um;
      fa = fm;
    } else {
      ub = um;
    }
  }
  out.omega = std::exp(0.5 * (ua + ub));
  const double base = m.c0 * std::abs(pl->a) * std::sin(pl->alpha * std::numbers::pi / 2.0);
  out.closed_form = std::pow(base, -1.0 / (pl->alpha - 1.0));
  out.closed_form_printed = std::pow(base, 1.0 / (pl->alpha - 1.0));
  return out;
}

/// alpha(p) = ln b(p) / ln p for real p > 1.
inline double variable_exponent(const AttenuationLaw& law, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("variable_exponent needs p > 1");
  const double b = eval_b(law, p).real();
  if (!(b > 0.0)) throw DomainError("variable_exponent needs b(p) > 0");
  return std::log(b) / std::log(p);
}

/// Logarithmic derivative d ln b / d ln p at real p > 0 (Richardson-extrapolated central
/// differences in ln p).
inline double local_exponent(const AttenuationLaw& law, double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("local_exponent needs p > 0");
  auto lb = [&](double u) {
    const double b = eval_b(law, std::exp(u)).real();
    if (!(b > 0.0)) throw DomainError("local_exponent needs b(p) > 0");
    return std::log(b);
  };
  const double u = std::log(p);
  const double h = 1e-3;
  const double d1 = (lb(u + h) - lb(u - h)) / (2.0 * h);
  const double d2 = (lb(u + h / 2) - lb(u - h / 2)) / h;
  return (4.0 * d2 - d1) / 3.0;
}

}  // namespace viscowave
