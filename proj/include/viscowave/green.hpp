#pragma once

// Green's functions of the viscoelastic wave equation for a point impulse, in 1-D and 3-D,
// evaluated at the retarded time tau = t - r/c0:
//
//   1-D:  u(t, x) = L^{-1}[ e^{-b(p)|x|} / (2 A B(p)) ](tau)
//   3-D:  u(t, r) = L^{-1}[ e^{-b(p) r} ](tau) / (4 pi r A)          (GreenSource::equation)
//         u(t, r) = L^{-1}[ e^{-b(p) r} / Q(p) ](tau) / (4 pi r)     (GreenSource::constitutive)
//
// with A = rho c0^2. For power laws b = a p^alpha (a > 0, alpha < 1) the 3-D function has the
// closed form (1/(4 pi r A)) kappa^{-1/alpha} P_alpha(tau / kappa^{1/alpha}), kappa = a r.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "viscowave/bromwich.hpp"
#include "viscowave/error.hpp"
#include "viscowave/law.hpp"
#include "viscowave/model.hpp"
#include "viscowave/parallel.hpp"
#include "viscowave/stable.hpp"

namespace viscowave {

enum class GreenSource { equation, constitutive };

enum class GreenRoute { bromwich, stable_density, elastic };

inline const char* to_string(GreenRoute r) {
  switch (r) {
    case GreenRoute::bromwich:
      return "bromwich";
    case GreenRoute::stable_density:
      return "stable_density";
    default:
      return "elastic";
  }
}

struct GreenOptions {
  ContourParams contour;
  GreenSource source = GreenSource::equation;
  /// Use the stable-density closed form for 3-D power-law media when it applies.
  bool fast_path = true;
};

struct GreenValue {
  double value = 0.0;
  double error = 0.0;
  double tau = 0.0;
  GreenRoute route = GreenRoute::bromwich;
  /// Contour actually used (Bromwich route only).
  double shift = 0.0;
  double omega_max = 0.0;
  int nodes = 0;
  double imag_residue = 0.0;
};

namespace detail {

inline void check_time(double t) {
  if (!std::isfinite(t)) throw InvalidArgument("green: t must be finite");
}

// Default contour abscissa for the retarded time, pulled towards the imaginary axis while
// exp(-b(eps) r) would grow (superlinear test laws with a < 0).
inline double green_shift(const MaterialModel& m, double tau, double r,
                          const ContourParams& cp) {
  if (cp.shift) return *cp.shift;
  double eps = tau != 0.0 ? 1.0 / std::abs(tau) : 1.0;
  while (eps > 1e-12 && eval_b(m, eps).real() * r < -1.0) eps *= 0.5;
  return eps;
}

template <class F>
GreenValue green_bromwich(F&& transform, double tau, double shift, const ContourParams& cp) {
  ContourParams c = cp;
  c.shift = shift;
  const auto inv = bromwich_invert(transform, tau, c);
  if (!inv.converged)
    throw AccuracyError("green: Bromwich inversion did not converge", inv.value, inv.error);
  GreenValue out;
  out.value = inv.value;
  out.error = inv.error;
  out.tau = tau;
  out.route = GreenRoute::bromwich;
  out.shift = inv.shift;
  out.omega_max = inv.omega_max;
  out.nodes = inv.nodes;
  out.imag_residue = inv.imag_residue;
  return out;
}

inline const PowerLaw* fast_path_law(const MaterialModel& m) {
  if (!m.law) return nullptr;
  const auto* pl = std::get_if<PowerLaw>(&*m.law);
  if (pl && pl->a > 0.0 && pl->alpha < 1.0) return pl;
  return nullptr;
}

}  // namespace detail

/// 1-D Green's function at time t and position x.
inline GreenValue green_1d(const MaterialModel& m, double t, double x,
                           const GreenOptions& opts = {}) {
  detail::check_time(t);
  m.validate();
  const double r = std::abs(x);
  const double tau = t - r / m.c0;
  const double A = elastic_modulus(m);
  if (!m.law || is_zero_law(*m.law)) {
    // Step of height c0/(2A) arriving at t = |x|/c0 (half height at the front).
    GreenValue out;
    out.tau = tau;
    out.route = GreenRoute::elastic;
    const double h = m.c0 / (2.0 * A);
    out.value = tau > 0.0 ? h : (tau == 0.0 ? 0.5 * h : 0.0);
    return out;
  }
  const double shift = detail::green_shift(m, tau, r, opts.contour);
  auto F = [&](cdouble p) { return std::exp(-eval_b(m, p) * r) / (2.0 * A * eval_B(m, p)); };
  return detail::green_bromwich(F, tau, shift, opts.contour);
}

/// 3-D Green's function at time t and radius r > 0. The elastic singular part (a delta shell
/// at r = c0 t) is not representable and is omitted: the elastic medium returns 0.
inline GreenValue green_3d(const MaterialModel& m, double t, double r,
                           const GreenOptions& opts = {}) {
  detail::check_time(t);
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("green_3d: radius must be > 0");
  m.validate();
  const double tau = t - r / m.c0;
  const double A = elastic_modulus(m);
  if (!m.law || is_zero_law(*m.law)) {
    GreenValue out;
    out.tau = tau;
    out.route = GreenRoute::elastic;
    return out;
  }
  const double pre = 1.0 / (4.0 * std::numbers::pi * r);
  if (opts.fast_path && opts.source == GreenSource::equation) {
    if (const PowerLaw* pl = detail::fast_path_law(m)) {
      const double kappa = pl->a * r;
      const double scale = std::pow(kappa, -1.0 / pl->alpha);
      const auto sd = stable_density_detail(pl->alpha, tau * scale);
      GreenValue out;
      out.tau = tau;
      out.route = GreenRoute::stable_density;
      out.value = pre / A * scale * sd.value;
      out.error = pre / A * scale * sd.error;
      return out;
    }
  }
  const double shift = detail::green_shift(m, tau, r, opts.contour);
  if (opts.source == GreenSource::constitutive) {
    auto F = [&](cdouble p) { return pre * std::exp(-eval_b(m, p) * r) / eval_Q(m, p); };
    return detail::green_bromwich(F, tau, shift, opts.contour);
  }
  auto F = [&](cdouble p) { return pre / A * std::exp(-eval_b(m, p) * r); };
  return detail::green_bromwich(F, tau, shift, opts.contour);
}

struct GreenSnapshot {
  double t = 0.0;
  int dimension = 3;
  /// x (1-D) or radius (3-D), strictly increasing.
  std::vector<double> positions;
  std::vector<double> values;
  std::vector<double> errors;
  std::vector<GreenRoute> routes;
  /// Contour parameters: user overrides (if any) and the extremes actually used.
  std::optional<double> shift_override;
  std::optional<double> omega_max_override;
  int nodes = 0;
  double max_shift_used = 0.0;
  double max_omega_reached = 0.0;
};

/// Batch evaluation over a grid, parallel over points, in grid order.
inline GreenSnapshot snapshot(const MaterialModel& m, double t, const std::vector<double>& grid,
                              int dimension, const GreenOptions& opts = {},
                              unsigned threads = 0) {
  if (dimension != 1 && dimension != 3) throw InvalidArgument("snapshot: dimension must be 1 or 3");
  if (grid.empty()) throw InvalidArgument("snapshot: empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw InvalidArgument("snapshot: grid must be strictly increasing");
  if (dimension == 3 && !(grid.front() > 0.0))
    throw InvalidArgument("snapshot: 3-D radii must be positive");
  m.validate();

  auto point = [&](double x) {
    return dimension == 1 ? green_1d(m, t, x, opts) : green_3d(m, t, x, opts);
  };
  const auto vals = parallel_map(grid, point, threads);

  GreenSnapshot s;
  s.t = t;
  s.dimension = dimension;
  s.positions = grid;
  s.shift_override = opts.contour.shift;
  s.omega_max_override = opts.contour.omega_max;
  s.nodes = opts.contour.nodes;
  for (const auto& v : vals) {
    if (!std::isfinite(v.value)) throw NumericError("snapshot: non-finite Green's function value");
    s.values.push_back(v.value);
    s.errors.push_back(v.error);
    s.routes.push_back(v.route);
    s.max_shift_used = std::max(s.max_shift_used, v.shift);
    s.max_omega_reached = std::max(s.max_omega_reached, v.omega_max);
  }
  return s;
}

}  // namespace viscowave
