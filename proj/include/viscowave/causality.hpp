#pragma once

// Finite vs infinite propagation speed via the Paley-Wiener criterion. The decision is read off
// a fitted asymptotic tail A(w) ~ C w^s ln^q w over the top two decades below w_max, because no
// finite integral can tell ln ln w growth from boundedness.

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "viscowave/dispersion.hpp"
#include "viscowave/error.hpp"
#include "viscowave/law.hpp"
#include "viscowave/quadrature.hpp"

namespace viscowave {

enum class SpeedClass { finite, infinite, inconclusive };

inline const char* to_string(SpeedClass c) {
  switch (c) {
    case SpeedClass::finite:
      return "finite";
    case SpeedClass::infinite:
      return "infinite";
    default:
      return "inconclusive";
  }
}

/// A(w) ~ C w^s ln^q w.
struct TailModel {
  double C = 0.0;
  double s = 0.0;
  double q = 0.0;
  /// RMS residual of the fit in ln A.
  double residual = 0.0;
  /// A vanishes identically on the fit window.
  bool zero = false;
};

struct PwOptions {
  double omega_max = 1e6;
  /// Fit window [omega_max / 10^decades, omega_max].
  double fit_decades = 2.0;
  int fit_points = 41;
  /// |s - 1| <= s_tol is treated as the linear boundary case, decided by q.
  double s_tol = 0.02;
  /// Largest acceptable RMS residual of the log-fit.
  double residual_tol = 1e-2;
  double rel_tol = 1e-8;
};

enum class PwStatus { convergent, divergent, inconclusive };

struct PwResult {
  /// Integral of A/(1 + w^2) over (0, omega_max] plus the fitted tail when convergent;
  /// +infinity when divergent.
  double value = 0.0;
  double integral_to_cutoff = 0.0;
  double tail_estimate = 0.0;
  PwStatus status = PwStatus::inconclusive;
  TailModel tail;
  std::vector<std::string> notes;

  bool convergent() const { return status == PwStatus::convergent; }
};

/// Least-squares fit of ln A against (1, ln w, ln ln w) over the top decades below w_max.
/// Throws InconclusiveError when A is not positive on the window.
inline TailModel fit_tail(const AttenuationLaw& law, const PwOptions& opts = {}) {
  if (!(opts.omega_max >= 1e3)) throw InvalidArgument("tail fit needs omega_max >= 1e3");
  if (opts.fit_points < 4) throw InvalidArgument("tail fit needs at least 4 points");
  const int n = opts.fit_points;
  const double lo = opts.omega_max * std::pow(10.0, -opts.fit_decades);
  std::vector<double> w(n), a(n);
  bool all_zero = true;
  for (int i = 0; i < n; ++i) {
    w[i] = lo * std::pow(opts.omega_max / lo, static_cast<double>(i) / (n - 1));
    a[i] = attenuation(law, w[i]);
    if (a[i] != 0.0) all_zero = false;
  }
  TailModel tm;
  if (all_zero) {
    tm.zero = true;
    return tm;
  }
  Eigen::MatrixXd X(n, 3);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    if (!(a[i] > 0.0) || !std::isfinite(a[i]))
      throw InconclusiveError("attenuation is not positive on the tail-fit window");
    const double lw = std::log(w[i]);
    X(i, 0) = 1.0;
    X(i, 1) = lw;
    X(i, 2) = std::log(lw);
    y(i) = std::log(a[i]);
  }
  // Center and scale columns for conditioning: ln w and ln ln w are strongly correlated.
  Eigen::VectorXd mean = X.colwise().mean();
  Eigen::MatrixXd Z = X;
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(3);
  for (int j = 1; j < 3; ++j) {
    Z.col(j).array() -= mean(j);
    scale(j) = Z.col(j).norm();
    Z.col(j) /= scale(j);
  }
  const Eigen::VectorXd beta_z = Z.colPivHouseholderQr().solve(y);
  Eigen::VectorXd beta = beta_z;
  for (int j = 1; j < 3; ++j) beta(j) = beta_z(j) / scale(j);
  beta(0) = beta_z(0) - beta(1) * mean(1) - beta(2) * mean(2);
  const Eigen::VectorXd r = y - X * beta;
  tm.C = std::exp(beta(0));
  tm.s = beta(1);
  tm.q = beta(2);
  tm.residual = std::sqrt(r.squaredNorm() / n);
  return tm;
}

/// Paley-Wiener integral of A(w)/(1 + w^2) with an asymptotic convergence verdict.
inline PwResult pw_integral(const AttenuationLaw& law, const PwOptions& opts = {}) {
  validate(law);
  PwResult out;
  try {
    out.tail = fit_tail(law, opts);
  } catch (const InconclusiveError& e) {
    out.status = PwStatus::inconclusive;
    out.notes.emplace_back(e.what());
    out.value = std::numeric_limits<double>::quiet_NaN();
    return out;
  }

  // Numerical part over (w_lo, w_max] in u = ln w; the region below w_lo = 1e-8 contributes
  // at most A(w_lo) w_lo, which is negligible for laws with b(0+) = 0.
  const double u_lo = std::log(1e-8);
  const double u_hi = std::log(opts.omega_max);
  std::vector<double> bps;
  for (double u = u_lo + 2.0; u < u_hi; u += 2.0) bps.push_back(u);
  auto g = [&](double u) {
    const double w = std::exp(u);
    return attenuation(law, w) * w / (1.0 + w * w);
  };
  QuadratureOptions q{opts.rel_tol, 1e-14, 4000};
  const auto core = integrate(g, u_lo, u_hi, q, bps);
  out.integral_to_cutoff = core.value;

  const TailModel& tm = out.tail;
  if (tm.zero) {
    out.status = PwStatus::convergent;
    out.value = core.value;
    out.notes.emplace_back("attenuation vanishes on the fit window");
    return out;
  }
  if (tm.residual > opts.residual_tol) {
    std::ostringstream os;
    os << "tail fit residual " << tm.residual << " exceeds " << opts.residual_tol;
    out.notes.push_back(os.str());
    out.status = PwStatus::inconclusive;
    out.value = std::numeric_limits<double>::quiet_NaN();
    return out;
  }

  const double U = u_hi;
  if (tm.s < 1.0 - opts.s_tol) {
    // Tail integrand C e^{(s-1)u} u^q decays exponentially in u.
    auto tail = [&](double u) { return tm.C * std::exp((tm.s - 1.0) * u) * std::pow(u, tm.q); };
    auto t = integrate(tail, U, U + 60.0 / (1.0 - tm.s), QuadratureOptions{1e-10, 0.0, 400});
    out.tail_estimate = t.value;
    out.status = PwStatus::convergent;
    out.notes.emplace_back("sublinear tail: s < 1");
  } else if (tm.s <= 1.0 + opts.s_tol) {
    if (tm.q < -1.0) {
      // int_U^inf C u^q du with s = 1.
      out.tail_estimate = tm.C * std::pow(U, tm.q + 1.0) / (-(tm.q + 1.0));
      out.status = PwStatus::convergent;
      out.notes.emplace_back("linear boundary case with q < -1: convergent");
    } else {
      out.status = PwStatus::divergent;
      out.notes.emplace_back("linear boundary case with q >= -1: divergent");
    }
  } else {
    out.status = PwStatus::divergent;
    out.notes.emplace_back("superlinear tail: s > 1");
  }
  out.value = out.status == PwStatus::convergent ? core.value + out.tail_estimate
                                                 : std::numeric_limits<double>::infinity();
  return out;
}

enum class Tri { yes, no, inconclusive };

/// Decides from the tail model whether exp(-2 A(w) r) is integrable in w.
inline Tri square_integrability(const TailModel& tm, double r, const PwOptions& opts = {}) {
  if (!(r > 0.0)) throw InvalidArgument("square_integrability needs r > 0");
  if (tm.zero) return Tri::no;
  if (tm.s > opts.s_tol) return Tri::yes;
  if (tm.s < -opts.s_tol) return Tri::no;
  // Logarithmic regime A ~ C ln^q w.
  if (tm.q > 1.1) return Tri::yes;
  if (tm.q < 0.9) return Tri::no;
  // A ~ C ln w: the integrand is w^{-2 C r}; integrable iff 2 C r > 1 (10% margin).
  const double k = 2.0 * tm.C * r;
  if (k > 1.1) return Tri::yes;
  if (k < 0.9) return Tri::no;
  return Tri::inconclusive;
}

/// Boolean form: throws InconclusiveError inside the decision margin.
inline bool square_integrability(const AttenuationLaw& law, double r, const PwOptions& opts = {}) {
  const Tri t = square_integrability(fit_tail(law, opts), r, opts);
  if (t == Tri::inconclusive)
    throw InconclusiveError("square integrability undecided: 2 C r within 10% of 1");
  return t == Tri::yes;
}

struct ClassifyOptions {
  PwOptions pw;
  std::vector<double> radii = {0.01, 0.1, 1.0, 10.0};
};

struct CausalityVerdict {
  SpeedClass classification = SpeedClass::inconclusive;
  PwResult pw;
  std::vector<std::pair<double, Tri>> square_integrable_at;
  std::vector<std::string> notes;
};

inline CausalityVerdict classify(const AttenuationLaw& law, const ClassifyOptions& opts = {}) {
  CausalityVerdict v;
  v.pw = pw_integral(law, opts.pw);
  v.notes = v.pw.notes;
  if (v.pw.status == PwStatus::divergent) {
    v.classification = SpeedClass::infinite;
    return v;
  }
  if (v.pw.status == PwStatus::inconclusive) return v;
  bool all = true;
  for (double r : opts.radii) {
    const Tri t = square_integrability(v.pw.tail, r, opts.pw);
    v.square_integrable_at.emplace_back(r, t);
    if (t != Tri::yes) all = false;
  }
  if (all) {
    v.classification = SpeedClass::finite;
  } else {
    v.notes.emplace_back(
        "Paley-Wiener integral converges but exp(-2 A r) is not integrable at every sampled r");
  }
  return v;
}

}  // namespace viscowave
