#pragma once

// Positive measures on (0, inf) and integration of kernels against them.
//
// A SpectralMeasure is a finite list of Dirac atoms plus an optional density. Densities are
// integrated in the logarithmic variable u = ln(xi); the central window around the kernel's
// natural scale is integrated adaptively and the two power-law tails are summed chunk by
// chunk until the geometric remainder is below tolerance.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "viscowave/error.hpp"
#include "viscowave/quadrature.hpp"

namespace viscowave {

using cdouble = std::complex<double>;

/// Dirac component weight * delta(r - location).
struct Atom {
  double location;
  double weight;
};

/// (a sin(pi alpha)/pi) xi^(alpha-1) d xi: the spectral measure of b(p) = a p^alpha.
struct PowerLawDensity {
  double a = 1.0;
  double alpha = 0.5;

  double operator()(double xi) const {
    return a * std::sin(std::numbers::pi * alpha) / std::numbers::pi * std::pow(xi, alpha - 1.0);
  }
};

/// Sampled density. Values are interpolated linearly in ln(xi); the density is zero below the
/// first node and continues as value.back() * (xi/xi.back())^tail_exponent beyond the last.
struct TabulatedDensity {
  std::vector<double> xi;
  std::vector<double> value;
  std::optional<double> tail_exponent;

  double operator()(double x) const {
    if (xi.empty() || x < xi.front()) return 0.0;
    if (x >= xi.back()) {
      if (x == xi.back()) return value.back();
      return tail_exponent ? value.back() * std::pow(x / xi.back(), *tail_exponent) : 0.0;
    }
    const auto it = std::upper_bound(xi.begin(), xi.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xi.begin()) - 1;
    const double w = (std::log(x) - std::log(xi[i])) / (std::log(xi[i + 1]) - std::log(xi[i]));
    return value[i] + w * (value[i + 1] - value[i]);
  }
};

using Density = std::variant<PowerLawDensity, TabulatedDensity>;

struct SpectralMeasure {
  std::vector<Atom> atoms;
  std::optional<Density> density;

  bool empty() const { return atoms.empty() && !density; }

  void validate() const {
    for (const auto& atom : atoms) {
      if (!(atom.location > 0.0) || !std::isfinite(atom.location))
        throw InvalidArgument("atom location must be positive and finite");
      if (!(atom.weight > 0.0) || !std::isfinite(atom.weight))
        throw InvalidArgument("atom weight must be positive and finite");
    }
    if (!density) return;
    if (const auto* pl = std::get_if<PowerLawDensity>(&*density)) {
      if (!(pl->a > 0.0)) throw InvalidArgument("power-law density needs a > 0");
      if (!(pl->alpha > 0.0 && pl->alpha < 1.0))
        throw InvalidArgument("power-law density needs alpha in (0,1)");
    } else {
      const auto& tab = std::get<TabulatedDensity>(*density);
      if (tab.xi.size() != tab.value.size() || tab.xi.size() < 2)
        throw InvalidArgument("tabulated density needs at least two (xi, value) pairs");
      for (std::size_t i = 0; i < tab.xi.size(); ++i) {
        if (!(tab.xi[i] > 0.0)) throw InvalidArgument("tabulated density nodes must be positive");
        if (i > 0 && !(tab.xi[i] > tab.xi[i - 1]))
          throw InvalidArgument("tabulated density nodes must be strictly increasing");
        if (!(tab.value[i] >= 0.0)) throw InvalidArgument("tabulated density values must be >= 0");
      }
    }
  }
};

struct MeasureIntegralOptions {
  double rel_tol = 1e-9;
  double abs_tol = 0.0;
  /// Natural scale of the kernel in xi (|p| for Stieltjes kernels, 1/t for exponentials).
  double center = 1.0;
  /// Points in xi where the kernel is sharply peaked (near-poles); used as breakpoints.
  std::vector<double> peaks;
  double peak_width = 0.0;
};

namespace detail {

inline constexpr double kChunk = 4.0;  // width of tail chunks in ln(xi)
inline constexpr double kMaxLog = 700.0;

inline std::vector<double> log_breakpoints(const MeasureIntegralOptions& opts) {
  std::vector<double> out;
  for (double x : opts.peaks) {
    if (!(x > 0.0)) continue;
    out.push_back(std::log(x));
    for (double k : {1.0, 5.0, 30.0}) {
      const double w = k * opts.peak_width;
      if (w <= 0.0) continue;
      if (x - w > 0.0) out.push_back(std::log(x - w));
      out.push_back(std::log(x + w));
    }
  }
  return out;
}

// Integrates g(u) over [start, +/-inf) chunk by chunk.
template <class G>
auto integrate_log_tail(G& g, double start, int direction, const MeasureIntegralOptions& opts,
                        double reference) -> SeriesResult<std::decay_t<decltype(g(0.0))>> {
  using T = std::decay_t<decltype(g(0.0))>;
  QuadratureOptions q{opts.rel_tol * 1e-2, 0.0, 400};
  SeriesOptions s;
  s.rel_tol = opts.rel_tol;
  s.abs_tol = std::max(opts.abs_tol, opts.rel_tol * reference);
  s.use_wynn = false;
  s.max_terms = static_cast<int>((kMaxLog - std::abs(start)) / kChunk);
  if (s.max_terms < 3) {
    SeriesResult<T> none;
    none.converged = true;
    return none;
  }
  q.abs_tol = 1e-3 * s.abs_tol;
  return sum_series<T>(
      [&](int k) {
        const double a = start + direction * k * kChunk;
        const double b = a + direction * kChunk;
        auto r = integrate(g, std::min(a, b), std::max(a, b), q);
        return r;
      },
      s);
}

template <class Kernel>
auto integrate_power_density(const PowerLawDensity& d, Kernel& kernel,
                             const MeasureIntegralOptions& opts)
    -> QuadratureResult<std::decay_t<decltype(kernel(1.0))>> {
  using T = std::decay_t<decltype(kernel(1.0))>;
  auto g = [&](double u) -> T {
    const double xi = std::exp(u);
    return kernel(xi) * (d(xi) * xi);
  };
  const double c = std::log(opts.center);
  const double half = 8.0;
  std::vector<double> bps = log_breakpoints(opts);
  double lo = c - half;
  double hi = c + half;
  for (double b : bps) {
    lo = std::min(lo, b - 1.0);
    hi = std::max(hi, b + 1.0);
  }
  QuadratureOptions q{opts.rel_tol * 1e-2, opts.abs_tol, 4000};
  auto core = integrate(g, lo, hi, q, bps);
  const double ref = std::abs(core.value);
  auto right = integrate_log_tail(g, hi, +1, opts, ref);
  auto left = integrate_log_tail(g, lo, -1, opts, ref);
  QuadratureResult<T> out;
  out.value = core.value + right.value + left.value;
  out.error = core.error + right.error + left.error;
  out.converged = core.converged && right.converged && left.converged;
  return out;
}

template <class Kernel>
auto integrate_tabulated_density(const TabulatedDensity& d, Kernel& kernel,
                                 const MeasureIntegralOptions& opts)
    -> QuadratureResult<std::decay_t<decltype(kernel(1.0))>> {
  using T = std::decay_t<decltype(kernel(1.0))>;
  const std::size_t n = d.xi.size();
  std::vector<double> lx(n);
  for (std::size_t i = 0; i < n; ++i) lx[i] = std::log(d.xi[i]);

  auto g = [&](double u) -> T {
    // Interpolate in u directly; u lies inside [lx.front(), lx.back()].
    auto it = std::upper_bound(lx.begin(), lx.end(), u);
    std::size_t i = it == lx.begin() ? 0 : static_cast<std::size_t>(it - lx.begin()) - 1;
    if (i + 1 >= n) i = n - 2;
    const double w = (u - lx[i]) / (lx[i + 1] - lx[i]);
    const double v = d.value[i] + w * (d.value[i + 1] - d.value[i]);
    const double xi = std::exp(u);
    return kernel(xi) * (v * xi);
  };
  std::vector<double> bps(lx.begin() + 1, lx.end() - 1);
  for (double b : log_breakpoints(opts)) bps.push_back(b);
  QuadratureOptions q{opts.rel_tol * 1e-2, opts.abs_tol,
                      static_cast<int>(std::max<std::size_t>(4000, 8 * n))};
  auto core = integrate(g, lx.front(), lx.back(), q, bps);

  QuadratureResult<T> out = core;
  if (d.tail_exponent && d.value.back() > 0.0) {
    const double s = *d.tail_exponent;
    const double x_last = d.xi.back();
    const double v_last = d.value.back();
    auto tail = [&](double u) -> T {
      const double xi = std::exp(u);
      return kernel(xi) * (v_last * std::pow(xi / x_last, s) * xi);
    };
    auto t = integrate_log_tail(tail, lx.back(), +1, opts, std::abs(core.value));
    out.value += t.value;
    out.error += t.error;
    out.converged = out.converged && t.converged;
  }
  return out;
}

}  // namespace detail

/// Integral of kernel(xi) against the density part of the measure.
template <class Kernel>
auto integrate_density(const Density& density, Kernel kernel, const MeasureIntegralOptions& opts)
    -> QuadratureResult<std::decay_t<decltype(kernel(1.0))>> {
  if (const auto* pl = std::get_if<PowerLawDensity>(&density))
    return detail::integrate_power_density(*pl, kernel, opts);
  return detail::integrate_tabulated_density(std::get<TabulatedDensity>(density), kernel, opts);
}

/// Integral of kernel(xi) against the whole measure: exact atom sum plus density quadrature.
/// Throws AccuracyError when the density quadrature misses its target.
template <class Kernel>
auto integrate_measure(const SpectralMeasure& m, Kernel kernel, const MeasureIntegralOptions& opts)
    -> std::decay_t<decltype(kernel(1.0))> {
  using T = std::decay_t<decltype(kernel(1.0))>;
  T sum{};
  for (const auto& atom : m.atoms) sum += kernel(atom.location) * atom.weight;
  if (!m.density) return sum;
  auto r = integrate_density(*m.density, kernel, opts);
  const double scale = std::abs(T(sum + r.value));
  if (!r.converged && r.error > std::max(opts.abs_tol, opts.rel_tol * scale) * 10.0)
    throw AccuracyError("density quadrature did not converge", std::abs(T(sum + r.value)),
                        r.error);
  return sum + r.value;
}

struct GrowthCheck {
  bool finite = true;
  /// Integral of 1/(1+r) against the measure; for a divergent measure, the part accumulated
  /// up to the last tabulated node.
  double value = 0.0;
};

/// Checks the growth condition: the integral of 1/(1+r) against m must be finite.
inline GrowthCheck growth_check(const SpectralMeasure& m, double tol = 1e-9) {
  m.validate();
  GrowthCheck out;
  for (const auto& atom : m.atoms) out.value += atom.weight / (1.0 + atom.location);
  if (!m.density) return out;

  MeasureIntegralOptions opts;
  opts.rel_tol = tol;
  auto kernel = [](double xi) { return 1.0 / (1.0 + xi); };

  if (const auto* pl = std::get_if<PowerLawDensity>(&*m.density)) {
    // xi^(alpha-1)/(1+xi) is integrable at both ends for alpha in (0,1).
    out.value += detail::integrate_power_density(*pl, kernel, opts).value;
    return out;
  }

  const auto& tab = std::get<TabulatedDensity>(*m.density);
  TabulatedDensity body = tab;
  body.tail_exponent.reset();
  out.value += detail::integrate_tabulated_density(body, kernel, opts).value;

  const double vmax = *std::max_element(tab.value.begin(), tab.value.end());
  if (!tab.tail_exponent) {
    if (tab.value.back() > tol * std::max(vmax, 1e-300))
      throw InconclusiveError(
          "tabulated density has mass at its last node but no declared tail exponent");
    return out;
  }
  if (tab.value.back() == 0.0) return out;
  // The tail behaves like xi^(s-1) against 1/(1+xi): integrable iff s < 0.
  if (*tab.tail_exponent >= 0.0) {
    out.finite = false;
    return out;
  }
  auto tail_only = [&](double u) {
    const double xi = std::exp(u);
    return tab.value.back() * std::pow(xi / tab.xi.back(), *tab.tail_exponent) * xi / (1.0 + xi);
  };
  auto t = detail::integrate_log_tail(tail_only, std::log(tab.xi.back()), +1, opts, out.value);
  out.value += t.value;
  return out;
}

struct StieltjesOptions {
  double rel_tol = 1e-9;
};

/// Stieltjes transform: integral of m(dr)/(p + r). p must lie off the closed negative real axis.
inline cdouble stieltjes(const SpectralMeasure& m, cdouble p, const StieltjesOptions& so = {}) {
  if (p.imag() == 0.0 && p.real() <= 0.0)
    throw InvalidArgument("stieltjes: p on the closed negative real axis");
  MeasureIntegralOptions opts;
  opts.rel_tol = so.rel_tol;
  opts.center = std::abs(p);
  if (p.real() < 0.0) {
    opts.peaks.push_back(-p.real());
    opts.peak_width = std::abs(p.imag());
  }
  return integrate_measure(m, [p](double xi) { return 1.0 / (p + xi); }, opts);
}

}  // namespace viscowave
