#pragma once

// Numerical inverse Laplace transform along a vertical Bromwich line Re p = shift.
//
//   f(t) = (1/2 pi) int e^{(s + i w) t} F(s + i w) dw = (e^{s t}/pi) int_0^inf Re[e^{i w t} F(s + i w)] dw
//
// using F(conj p) = conj F(p). The half-line is cut into half-periods pi/|t| of the
// oscillating factor; the panel integrals are summed until they become negligible or, for
// slowly decaying transforms, Wynn's epsilon algorithm converges on the alternating partial
// sums. At t = 0 the panels grow geometrically instead.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

#include "viscowave/error.hpp"
#include "viscowave/quadrature.hpp"

namespace viscowave {

struct ContourParams {
  /// Abscissa of the Bromwich line; defaults to 1/|t| (1 at t = 0).
  std::optional<double> shift;
  /// Hard truncation of the frequency range; when unset the range is extended until the
  /// integrand's contribution is negligible. A truncated inversion counts as converged only
  /// if its last panel is below 1e-6 of the result (or abs_tol).
  std::optional<double> omega_max;
  /// Sub-panels per half-period of e^{i w t}.
  int nodes = 2;
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_panels = 40000;
  /// Repeat with twice the nodes and fold the difference into the error estimate.
  bool node_doubling = false;
  /// Also integrate the imaginary part over the full line (evaluating F at both w and -w).
  bool check_symmetry = false;
};

struct InversionResult {
  double value = 0.0;
  double error = 0.0;
  double shift = 0.0;
  /// Largest frequency reached by the panel sum.
  double omega_max = 0.0;
  int nodes = 0;
  int panels = 0;
  bool converged = true;
  double imag_residue = 0.0;
};

namespace detail {

template <class G>
SeriesResult<double> bromwich_panel_sum(G& g, double t, double shift, const ContourParams& cp,
                                        double scale, int nodes, double& reached) {
  const bool oscillating = t != 0.0;
  const double half_period = oscillating ? std::numbers::pi / std::abs(t) : 0.0;
  const double sub = static_cast<double>(std::max(nodes, 1));

  auto edge = [&](int k) -> double {
    if (oscillating) return k * half_period;
    return k == 0 ? 0.0 : shift * std::ldexp(1.0, k - 1);
  };

  SeriesOptions so;
  so.rel_tol = cp.rel_tol;
  so.abs_tol = cp.abs_tol;
  so.max_terms = cp.max_panels;
  so.min_terms = 4;
  so.use_wynn = !cp.omega_max.has_value();
  so.use_geometric = !cp.omega_max.has_value();

  double running = scale;
  double last_panel = 0.0;
  auto next = [&](int k) -> QuadratureResult<double> {
    double a = edge(k);
    double b = edge(k + 1);
    if (cp.omega_max) {
      if (a >= *cp.omega_max) return {};
      b = std::min(b, *cp.omega_max);
    }
    reached = std::max(reached, b);
    std::vector<double> bps;
    for (int j = 1; j < static_cast<int>(sub); ++j) bps.push_back(a + (b - a) * j / sub);
    if (k == 0) {
      // Resolve the scale of the shift near w = 0 when the half-period is much longer.
      for (double w = shift; w < b; w *= 2.0) bps.push_back(w);
      for (double w = shift / 2.0; w > 1e-6 * shift && w > a; w /= 4.0) bps.push_back(w);
    }
    QuadratureOptions q;
    q.rel_tol = cp.rel_tol * 0.1;
    q.abs_tol = std::max(cp.abs_tol, cp.rel_tol * running) * 1e-2;
    q.max_intervals = 400 + static_cast<int>(bps.size());
    auto r = integrate(g, a, b, q, bps);
    running = std::max(running, std::abs(r.value));
    last_panel = r.value;
    return r;
  };
  auto out = sum_series<double>(next, so);
  if (cp.omega_max) {
    // The panel sum stops at the cut; the contribution of the last panel bounds the
    // neglected tail of the (alternating) remainder.
    const double tail = std::abs(last_panel);
    out.error += tail;
    out.converged = tail <= std::max(cp.abs_tol, 1e-6 * std::abs(out.value));
  }
  return out;
}

}  // namespace detail

/// Inverse Laplace transform of `transform` at time t along Re p = shift. The transform must
/// be analytic for Re p >= shift and satisfy F(conj p) = conj F(p).
template <class F>
InversionResult bromwich_invert(F&& transform, double t, const ContourParams& cp = {}) {
  if (!std::isfinite(t)) throw InvalidArgument("bromwich_invert: t must be finite");
  const double shift = cp.shift.value_or(t != 0.0 ? 1.0 / std::abs(t) : 1.0);
  if (!(shift >= 0.0)) throw InvalidArgument("bromwich_invert: contour shift must be >= 0");

  auto run = [&](int nodes, InversionResult& res) {
    auto g = [&](double w) {
      const std::complex<double> p(shift, w);
      const std::complex<double> v = transform(p) * std::polar(1.0, w * t);
      return v.real();
    };
    const double scale = std::abs(transform(std::complex<double>(std::max(shift, 1e-300), 0.0))) *
                         std::min(shift > 0.0 ? shift : 1.0,
                                  t != 0.0 ? std::numbers::pi / std::abs(t) : 1.0);
    double reached = 0.0;
    auto s = detail::bromwich_panel_sum(g, t, shift == 0.0 ? 1.0 : shift, cp,
                                        std::isfinite(scale) ? scale : 0.0, nodes, reached);
    const double factor = std::exp(shift * t) / std::numbers::pi;
    res.value = factor * s.value;
    res.error = factor * s.error;
    res.converged = s.converged;
    res.panels = s.terms;
    res.omega_max = reached;
    res.nodes = nodes;
  };

  InversionResult out;
  out.shift = shift;
  run(cp.nodes, out);
  if (cp.node_doubling) {
    InversionResult fine;
    run(2 * cp.nodes, fine);
    out.error = std::max(out.error, std::abs(fine.value - out.value));
    out.converged = out.converged && fine.converged;
  }
  if (cp.check_symmetry) {
    auto h = [&](double w) {
      const std::complex<double> up = transform(std::complex<double>(shift, w)) *
                                      std::polar(1.0, w * t);
      const std::complex<double> down = transform(std::complex<double>(shift, -w)) *
                                        std::polar(1.0, -w * t);
      return (up + down).imag();
    };
    double reached = 0.0;
    auto s = detail::bromwich_panel_sum(h, t, shift == 0.0 ? 1.0 : shift, cp, 0.0, cp.nodes,
                                        reached);
    out.imag_residue = std::exp(shift * t) / (2.0 * std::numbers::pi) * s.value;
  }
  if (!std::isfinite(out.value))
    throw AccuracyError("bromwich_invert: non-finite result", out.value, out.error);
  return out;
}

}  // namespace viscowave
