#pragma once

// One-sided (totally skewed) alpha-stable density P_alpha(z), 0 < alpha < 1, defined by its
// Laplace transform exp(-p^alpha).
//
// Moderate z: Zolotarev's single-integral representation in Kanter's form,
//   P(x) = alpha/(1-alpha) (1/pi) x^{-1/(1-alpha)} int_0^pi K(phi) exp(-x^{-alpha/(1-alpha)} K(phi)) dphi,
//   K(phi) = (sin(alpha phi)/sin(phi))^{1/(1-alpha)} sin((1-alpha) phi)/sin(alpha phi),
// with exp(-X K(0)) factored out so the integral stays O(1) as z -> 0+.
// Large z: the convergent series (1/pi) sum_k (-1)^{k+1} Gamma(k alpha+1)/k! sin(k pi alpha) z^{-k alpha-1}.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "viscowave/bromwich.hpp"
#include "viscowave/error.hpp"
#include "viscowave/quadrature.hpp"

namespace viscowave {

struct StableDensityResult {
  double value = 0.0;
  double error = 0.0;
  /// ln P, finite even when P itself underflows.
  double log_value = -std::numeric_limits<double>::infinity();
  /// P underflows double precision (z too close to 0+); value is reported as 0.
  bool underflow = false;
  bool series = false;
};

namespace detail {

inline double kanter_K(double alpha, double phi) {
  const double ia = 1.0 / (1.0 - alpha);
  if (phi < 1e-8) {
    // Limit phi -> 0: alpha^{alpha/(1-alpha)} (1-alpha), plus the O(phi^2) correction
    // is below double resolution here.
    return std::pow(alpha, alpha * ia) * (1.0 - alpha);
  }
  const double sa = std::sin(alpha * phi);
  const double s = std::sin(phi);
  return std::pow(sa / s, ia) * std::sin((1.0 - alpha) * phi) / sa;
}

inline StableDensityResult stable_series(double alpha, double z, double rel_tol) {
  StableDensityResult out;
  out.series = true;
  const double lz = std::log(z);
  double sum = 0.0;
  double largest = 0.0;
  for (int k = 1; k < 400; ++k) {
    const double lg = std::lgamma(k * alpha + 1.0) - std::lgamma(k + 1.0);
    const double term = ((k % 2) ? 1.0 : -1.0) * std::exp(lg - (k * alpha + 1.0) * lz) *
                        std::sin(k * std::numbers::pi * alpha);
    sum += term;
    largest = std::max(largest, std::abs(term));
    const double next_mag =
        std::exp(std::lgamma((k + 1) * alpha + 1.0) - std::lgamma(k + 2.0) -
                 ((k + 1) * alpha + 1.0) * lz);
    if (next_mag <= rel_tol * 1e-2 * std::abs(sum) && k >= 2) break;
  }
  out.value = sum / std::numbers::pi;
  out.error = 1e-15 * largest / std::numbers::pi + rel_tol * std::abs(out.value);
  out.log_value = out.value > 0.0 ? std::log(out.value) : -std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace detail

/// Detailed evaluation of P_alpha(z). Throws InvalidArgument for alpha outside (0,1).
inline StableDensityResult stable_density_detail(double alpha, double z, double rel_tol = 1e-12) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("stable_density needs alpha in (0,1)");
  if (std::isnan(z)) throw InvalidArgument("stable_density: z is NaN");
  StableDensityResult out;
  if (z <= 0.0) {
    out.value = 0.0;
    return out;
  }
  if (std::isinf(z)) {
    out.value = 0.0;
    return out;
  }
  // The series terms shrink like z^{-alpha k}; use it once z^{-alpha} is comfortably small.
  if (std::pow(z, -alpha) < 0.15) return detail::stable_series(alpha, z, rel_tol);

  const double ia = 1.0 / (1.0 - alpha);
  const double lx = std::log(z);
  const double X = std::exp(-alpha * ia * lx);  // x^{-alpha/(1-alpha)}
  const double K0 = detail::kanter_K(alpha, 0.0);
  if (X * K0 > 2000.0) {
    // Far below the underflow threshold; report the leading-order logarithm only.
    out.underflow = true;
    out.log_value = std::log(alpha * ia / std::numbers::pi) - ia * lx - X * K0;
    return out;
  }
  auto g = [&](double phi) {
    const double K = detail::kanter_K(alpha, phi);
    if (!std::isfinite(K)) return 0.0;
    const double e = -X * std::max(K - K0, 0.0);
    return e < -745.0 ? 0.0 : K * std::exp(e);
  };
  // The integrand concentrates within ~1/sqrt(X) of phi = 0 when X is large.
  std::vector<double> bps;
  for (double w = 1.0 / std::sqrt(std::max(X, 1.0)); w < std::numbers::pi; w *= 2.0)
    bps.push_back(w);
  QuadratureOptions q{rel_tol * 0.1, 0.0, 2000};
  const auto r = integrate(g, 0.0, std::numbers::pi, q, bps);
  if (!(r.value > 0.0)) {
    out.underflow = true;
    return out;
  }
  out.log_value = std::log(alpha * ia / std::numbers::pi) - ia * lx - X * K0 + std::log(r.value);
  if (out.log_value < -745.0) {
    out.underflow = true;
    out.value = 0.0;
    return out;
  }
  out.value = std::exp(out.log_value);
  out.error = out.value * (r.error / r.value + 4.0 * std::numeric_limits<double>::epsilon() *
                                                   (1.0 + X * K0));
  if (!r.converged)
    throw AccuracyError("stable_density: quadrature did not converge", out.value, out.error);
  return out;
}

inline double stable_density(double alpha, double z) {
  return stable_density_detail(alpha, z).value;
}

/// Cross-check route: Bromwich inversion of exp(-p^alpha).
inline InversionResult stable_density_bromwich(double alpha, double z,
                                               const ContourParams& cp = {}) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("stable_density needs alpha in (0,1)");
  if (!(z > 0.0)) throw InvalidArgument("stable_density_bromwich needs z > 0");
  return bromwich_invert([alpha](std::complex<double> p) { return std::exp(-std::pow(p, alpha)); },
                         z, cp);
}

}  // namespace viscowave
