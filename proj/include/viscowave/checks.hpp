#pragma once

// Sampled certificates: admissibility of a dispersion-attenuation law (the complete-Bernstein
// conditions plus sublinearity and b(0+) = 0) and complete monotonicity of a real function.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "viscowave/error.hpp"
#include "viscowave/law.hpp"
#include "viscowave/parallel.hpp"

namespace viscowave {

struct AdmissibilityGrid {
  double p_min = 1e-6;
  double p_max = 1e6;
  int points_per_decade = 8;
  /// Number of rays in the open upper half plane, at angles k pi/(rays + 1).
  int rays = 15;
  /// Relative tolerance: violations beyond tol * |b(p)| fail.
  double tol = 1e-10;
};

struct Verdict {
  bool pass = true;
  std::string detail;
};

struct AdmissibilityReport {
  Verdict upper_half_plane;   // (i) Im b(p) >= 0 for Im p > 0
  Verdict positive_monotone;  // (ii) b >= 0 and nondecreasing on (0, inf)
  Verdict sublinear;          // (iii) b(p)/p -> 0 as p -> inf
  Verdict vanishes_at_zero;   // (iv) b(0+) = 0
  bool pass = true;
};

namespace detail {

inline std::string fmt_point(cdouble p) {
  std::ostringstream os;
  os.precision(6);
  os << "p=(" << p.real() << (p.imag() < 0 ? "" : "+") << p.imag() << "i)";
  return os.str();
}

inline std::vector<double> log_grid(double lo, double hi, int per_decade) {
  const int n = std::max(2, static_cast<int>(std::ceil(std::log10(hi / lo) * per_decade)) + 1);
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return out;
}

}  // namespace detail

/// Samples the four admissibility conditions of a dispersion-attenuation function.
inline AdmissibilityReport admissibility_check(const AttenuationLaw& law,
                                               const AdmissibilityGrid& grid = {}) {
  validate(law);
  AdmissibilityReport rep;
  const auto ps = detail::log_grid(grid.p_min, grid.p_max, grid.points_per_decade);
  const double tol = grid.tol;

  // (i) upper half plane
  for (int k = 1; k <= grid.rays && rep.upper_half_plane.pass; ++k) {
    const double theta = std::numbers::pi * k / (grid.rays + 1);
    for (double r : ps) {
      const cdouble p = std::polar(r, theta);
      const cdouble b = eval_b(law, p);
      if (!std::isfinite(b.real()) || !std::isfinite(b.imag()) ||
          b.imag() < -tol * std::abs(b)) {
        rep.upper_half_plane = {false, "Im b < 0 at " + detail::fmt_point(p)};
        break;
      }
    }
  }

  // (ii) nonnegative and nondecreasing on the positive axis; (iii) b/p nonincreasing
  std::vector<double> bs(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) bs[i] = eval_b(law, ps[i]).real();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const double slack = tol * std::abs(bs[i]);
    if (!std::isfinite(bs[i]) || bs[i] < -slack) {
      rep.positive_monotone = {false, "b < 0 at " + detail::fmt_point(ps[i])};
      break;
    }
    if (i > 0 && bs[i] < bs[i - 1] - tol * std::max(std::abs(bs[i]), std::abs(bs[i - 1]))) {
      rep.positive_monotone = {false, "b decreases near " + detail::fmt_point(ps[i])};
      break;
    }
  }
  for (std::size_t i = 1; i < ps.size(); ++i) {
    const double r0 = bs[i - 1] / ps[i - 1];
    const double r1 = bs[i] / ps[i];
    if (r1 > r0 + tol * std::abs(r0)) {
      rep.sublinear = {false, "b(p)/p increases near " + detail::fmt_point(ps[i])};
      break;
    }
  }
  if (rep.sublinear.pass) {
    const double top = bs.back() / ps.back();
    const double ref_p = grid.p_max * 1e-3;
    const double ref = eval_b(law, ref_p).real() / ref_p;
    const bool negligible = std::abs(top) <= 1e-12 * std::max(1.0, std::abs(ref));
    if (!negligible && !(top < (1.0 - 1e-6) * ref))
      rep.sublinear = {false, "b(p)/p does not decrease over the top three decades"};
  }

  // (iv) b(0+) by Aitken extrapolation of b(p_min 10^-k), k = 0,1,2
  {
    const double s0 = eval_b(law, grid.p_min).real();
    const double s1 = eval_b(law, grid.p_min * 1e-1).real();
    const double s2 = eval_b(law, grid.p_min * 1e-2).real();
    const double d1 = s1 - s0;
    const double d2 = s2 - s1;
    double limit = s2;
    if (std::abs(d2 - d1) > 1e-300 && std::isfinite(d2 * d2 / (d2 - d1)))
      limit = s2 - d2 * d2 / (d2 - d1);
    const double scale = std::abs(eval_b(law, 1.0));
    if (!std::isfinite(limit) || std::abs(limit) > std::max(1e-8, 1e-6 * scale)) {
      std::ostringstream os;
      os << "extrapolated b(0+) = " << limit;
      rep.vanishes_at_zero = {false, os.str()};
    }
  }

  rep.pass = rep.upper_half_plane.pass && rep.positive_monotone.pass && rep.sublinear.pass &&
             rep.vanishes_at_zero.pass;
  return rep;
}

struct CmOptions {
  int max_order = 4;
  /// Relative accuracy of the sampled function values, used to size the noise floor.
  double rel_noise = 1e-11;
  /// Additional absolute slack on the signed derivatives.
  double abs_tol = 0.0;
  /// Step as a fraction of t.
  double step_fraction = 0.1;
  unsigned threads = 1;
};

struct CmViolation {
  int order = 0;
  double t = 0.0;
  /// (-1)^n D^n f(t) (negative at a violation) and its uncertainty.
  double value = 0.0;
  double uncertainty = 0.0;
};

struct CmVerdict {
  bool pass = true;
  std::optional<CmViolation> first_violation;
  int evaluations = 0;
};

namespace detail {

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace detail

/// Checks (-1)^n f^(n)(t) >= 0 for n = 0..max_order at each grid point, with central finite
/// differences (steps h and h/2 combined by Richardson extrapolation). The first violation
/// in (t, order) order is reported.
inline CmVerdict cm_check(const std::function<double(double)>& f, const std::vector<double>& grid,
                          const CmOptions& opts = {}) {
  if (opts.max_order < 0 || opts.max_order > 6)
    throw InvalidArgument("cm_check: order must be in [0, 6]");
  if (grid.empty()) throw InvalidArgument("cm_check: empty grid");
  const int nmax = opts.max_order;

  struct PointResult {
    std::optional<CmViolation> violation;
    int evaluations = 0;
  };
  auto check_point = [&](double t) -> PointResult {
    const double h = opts.step_fraction * t;
    if (!(t > 0.0) || !std::isfinite(t))
      throw InvalidArgument("cm_check: grid points must be positive and finite");
    const double q = h / 4.0;  // finest offset unit (half of the half step)
    if (!(q > 0.0) || t + q == t || std::pow(q, nmax) == 0.0)
      throw NumericError("cm_check: finite-difference step underflow");
    if (t - nmax * h / 2.0 <= 0.0)
      throw InvalidArgument("cm_check: stencil reaches t <= 0; reduce step_fraction");
    // Samples at t + j q for j = -2 nmax .. 2 nmax.
    const int m = 2 * nmax;
    std::vector<double> fv(2 * m + 1);
    PointResult out;
    for (int j = -m; j <= m; ++j) {
      fv[j + m] = f(t + j * q);
      ++out.evaluations;
      if (!std::isfinite(fv[j + m])) throw NumericError("cm_check: non-finite function value");
    }
    double fscale = 0.0;
    for (double v : fv) fscale = std::max(fscale, std::abs(v));
    for (int n = 0; n <= nmax; ++n) {
      // D^n f(t) ~ sum_k (-1)^k C(n,k) f(t + (n/2 - k) step) / step^n, step = 4q (h) or 2q.
      auto diff = [&](int unit) {
        double s = 0.0;
        for (int k = 0; k <= n; ++k) {
          const int j = (n - 2 * k) * unit / 2;  // offset (n/2 - k) * step in units of q
          s += ((k % 2) ? -1.0 : 1.0) * detail::binomial(n, k) * fv[j + m];
        }
        return s / std::pow(unit * q, n);
      };
      double d;
      double unc;
      if (n == 0) {
        d = fv[m];
        unc = opts.rel_noise * std::abs(d);
      } else {
        const double coarse = diff(4);
        const double fine = diff(2);
        d = (4.0 * fine - coarse) / 3.0;
        const double noise = opts.rel_noise * fscale * std::pow(2.0, n) / std::pow(2.0 * q, n);
        unc = std::abs(fine - coarse) / 3.0 + 2.0 * noise;
      }
      const double signed_d = (n % 2 ? -1.0 : 1.0) * d;
      if (signed_d < -(unc + opts.abs_tol)) {
        out.violation = CmViolation{n, t, signed_d, unc};
        return out;
      }
    }
    return out;
  };

  const auto results = parallel_map(grid, check_point, opts.threads);
  CmVerdict verdict;
  for (const auto& r : results) {
    verdict.evaluations += r.evaluations;
    if (r.violation && !verdict.first_violation) {
      verdict.pass = false;
      verdict.first_violation = r.violation;
    }
  }
  return verdict;
}

}  // namespace viscowave
