#pragma once

// Dispersion-attenuation functions b(p): the measure-backed form p * S[nu](p) and the
// closed-form complete-Bernstein families used throughout (power, log-power, Cole-type b1,
// two-exponent b2). All fractional powers and logarithms use principal branches.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <variant>

#include "viscowave/error.hpp"
#include "viscowave/measure.hpp"

namespace viscowave {

/// b(p) = p * integral nu(dr)/(p + r).
struct MeasureBacked {
  SpectralMeasure nu;
};

/// b(p) = a p^alpha with alpha in (0,3). Negative a is allowed only for alpha > 1 (the
/// superlinear counterexamples); such laws are never admissible.
struct PowerLaw {
  double a = 1.0;
  double alpha = 0.5;
};

/// b(p) = p / ln^alpha(1 + p).
struct LogPower {
  double alpha = 1.0;
};

/// b1(p) = c p^alpha / (a + p^alpha).
struct ColeType {
  double c = 1.0;
  double a = 1.0;
  double alpha = 0.5;
};

/// b2(p) = c (1 + tau p)^(alpha - beta) (tau p)^beta.
struct TwoExponent {
  double c = 1.0;
  double tau = 1.0;
  double alpha = 0.8;
  double beta = 0.4;
};

using AttenuationLaw = std::variant<MeasureBacked, PowerLaw, LogPower, ColeType, TwoExponent>;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

/// Short family tag, also used as the "type" field of the law JSON.
inline std::string law_tag(const AttenuationLaw& law) {
  return std::visit(overloaded{[](const MeasureBacked&) { return std::string("measure"); },
                               [](const PowerLaw&) { return std::string("power"); },
                               [](const LogPower&) { return std::string("log_power"); },
                               [](const ColeType&) { return std::string("cole"); },
                               [](const TwoExponent&) { return std::string("two_exponent"); }},
                    law);
}

/// Throws InvalidArgument when the parameters leave the family's range.
inline void validate(const AttenuationLaw& law) {
  auto finite = [](double v) { return std::isfinite(v); };
  std::visit(
      overloaded{
          [](const MeasureBacked& m) { m.nu.validate(); },
          [&](const PowerLaw& l) {
            if (!finite(l.a) || !(l.alpha > 0.0 && l.alpha < 3.0))
              throw InvalidArgument("PowerLaw needs finite a and alpha in (0,3)");
            if (l.a < 0.0 && !(l.alpha > 1.0))
              throw InvalidArgument("PowerLaw with a < 0 requires alpha > 1");
          },
          [&](const LogPower& l) {
            if (!(l.alpha > 0.0) || !finite(l.alpha))
              throw InvalidArgument("LogPower needs alpha > 0");
          },
          [&](const ColeType& l) {
            if (!(l.c > 0.0) || !(l.a > 0.0) || !finite(l.c) || !finite(l.a) ||
                !(l.alpha > 0.0 && l.alpha < 1.0))
              throw InvalidArgument("ColeType needs c > 0, a > 0, alpha in (0,1)");
          },
          [&](const TwoExponent& l) {
            if (!(l.c > 0.0) || !(l.tau > 0.0) || !finite(l.c) || !finite(l.tau) ||
                !(l.beta > 0.0) || !(l.beta <= l.alpha) || !(l.alpha < 1.0))
              throw InvalidArgument("TwoExponent needs c > 0, tau > 0, 0 < beta <= alpha < 1");
          }},
      law);
}

/// True for laws that exist only as counterexamples (negative or superlinear power laws).
inline bool flagged_inadmissible(const AttenuationLaw& law) {
  if (const auto* pl = std::get_if<PowerLaw>(&law)) return pl->a < 0.0 || pl->alpha >= 1.0;
  return false;
}

/// True for the zero law (empty measure or vanishing power-law coefficient).
inline bool is_zero_law(const AttenuationLaw& law) {
  if (const auto* m = std::get_if<MeasureBacked>(&law)) return m->nu.empty();
  if (const auto* pl = std::get_if<PowerLaw>(&law)) return pl->a == 0.0;
  return false;
}

namespace detail {

// Real power with exact zero imaginary part on the positive axis.
inline cdouble cpow(cdouble p, double e) {
  if (p.imag() == 0.0 && p.real() > 0.0) return std::pow(p.real(), e);
  return std::pow(p, e);
}

}  // namespace detail

/// b(p) for p off the closed negative real axis (p = 0 returns the limit b(0+) where finite).
inline cdouble eval_b(const AttenuationLaw& law, cdouble p, const StieltjesOptions& so = {}) {
  if (!std::isfinite(p.real()) || !std::isfinite(p.imag()))
    throw InvalidArgument("eval_b: p must be finite");
  if (p.imag() == 0.0 && p.real() < 0.0)
    throw InvalidArgument("eval_b: p on the negative real axis");
  if (p == cdouble(0.0)) {
    if (std::holds_alternative<LogPower>(law)) {
      const double alpha = std::get<LogPower>(law).alpha;
      if (alpha < 1.0) return 0.0;
      if (alpha == 1.0) return 1.0;
      return std::numeric_limits<double>::infinity();
    }
    return 0.0;
  }
  return std::visit(
      overloaded{
          [&](const MeasureBacked& m) -> cdouble {
            if (m.nu.empty()) return 0.0;
            return p * stieltjes(m.nu, p, so);
          },
          [&](const PowerLaw& l) -> cdouble { return l.a * detail::cpow(p, l.alpha); },
          [&](const LogPower& l) -> cdouble {
            // log1p keeps accuracy for small |p|.
            const cdouble lg = p.imag() == 0.0 ? cdouble(std::log1p(p.real()))
                                               : std::log(cdouble(1.0) + p);
            return p / detail::cpow(lg, l.alpha);
          },
          [&](const ColeType& l) -> cdouble {
            const cdouble q = detail::cpow(p, l.alpha);
            return l.c * q / (l.a + q);
          },
          [&](const TwoExponent& l) -> cdouble {
            const cdouble tp = l.tau * p;
            return l.c * detail::cpow(1.0 + tp, l.alpha - l.beta) * detail::cpow(tp, l.beta);
          }},
      law);
}

/// Boundary value b(s e^{-i pi}) = lim b(-s - i0) from below the cut, s > 0. Available for the
/// families built from powers of p and 1 + tau p.
inline cdouble eval_b_below_cut(const AttenuationLaw& law, double s) {
  if (!(s > 0.0)) throw InvalidArgument("eval_b_below_cut: s must be positive");
  auto below = [](double magnitude, double e) {
    // (magnitude e^{-i pi})^e
    return std::polar(std::pow(magnitude, e), -std::numbers::pi * e);
  };
  // (1 - x - i0)^e for x > 0.
  auto one_minus = [&](double x, double e) -> cdouble {
    if (x < 1.0) return std::pow(1.0 - x, e);
    return below(x - 1.0, e);
  };
  return std::visit(
      overloaded{
          [&](const PowerLaw& l) -> cdouble { return l.a * below(s, l.alpha); },
          [&](const ColeType& l) -> cdouble {
            const cdouble q = below(s, l.alpha);
            return l.c * q / (l.a + q);
          },
          [&](const TwoExponent& l) -> cdouble {
            return l.c * one_minus(l.tau * s, l.alpha - l.beta) * below(l.tau * s, l.beta);
          },
          [&](const auto&) -> cdouble {
            throw InvalidArgument("eval_b_below_cut: not available for this law family");
          }},
      law);
}

}  // namespace viscowave
