#pragma once

// Discrete spectra: nonnegative fitting of attenuation samples with atoms at fixed candidate
// locations, exact rational conversion of an atomic attenuation spectrum into the relaxation
// modulus Q(p) = rho p^2/B(p)^2, and Stieltjes-Perron recovery of continuous spectral densities.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "viscowave/checks.hpp"
#include "viscowave/error.hpp"
#include "viscowave/law.hpp"
#include "viscowave/measure.hpp"
#include "viscowave/model.hpp"
#include "viscowave/nnls.hpp"
#include "viscowave/parallel.hpp"
#include "viscowave/polynomial.hpp"

namespace viscowave {

struct AttenuationSamples {
  std::vector<double> omega;
  std::vector<double> attenuation;
  /// Optional per-sample weights of the squared residuals (all 1 when empty).
  std::vector<double> weight;

  void validate() const {
    if (omega.empty()) throw InvalidArgument("samples: no data");
    if (attenuation.size() != omega.size())
      throw InvalidArgument("samples: omega and attenuation lengths differ");
    if (!weight.empty() && weight.size() != omega.size())
      throw InvalidArgument("samples: weight length differs from omega");
    for (std::size_t i = 0; i < omega.size(); ++i) {
      if (!(omega[i] > 0.0) || !std::isfinite(omega[i]))
        throw InvalidArgument("samples: omega must be positive and finite");
      if (i > 0 && !(omega[i] > omega[i - 1]))
        throw InvalidArgument("samples: omega must be strictly increasing");
      if (!(attenuation[i] >= 0.0) || !std::isfinite(attenuation[i]))
        throw InvalidArgument("samples: attenuation must be >= 0 and finite");
      if (!weight.empty() && (!(weight[i] > 0.0) || !std::isfinite(weight[i])))
        throw InvalidArgument("samples: weights must be positive and finite");
    }
  }
};

enum class SpectrumSide { attenuation, relaxation };

inline const char* to_string(SpectrumSide s) {
  return s == SpectrumSide::attenuation ? "attenuation" : "relaxation";
}

/// Atoms {(r_n, c_n)} of nu, or {(s_m, d_m)} of mu plus the mass at zero mu0.
struct RationalSpectrum {
  SpectrumSide side = SpectrumSide::attenuation;
  std::vector<Atom> atoms;
  double mu0 = 0.0;

  SpectralMeasure measure() const { return SpectralMeasure{atoms, std::nullopt}; }
};

struct FitResult {
  RationalSpectrum spectrum;
  /// Weighted residual norm and the weighted norm of the samples.
  double residual_norm = 0.0;
  double sample_norm = 0.0;
  int iterations = 0;
  /// Candidate locations (including those whose weight came out zero).
  std::vector<double> candidates;
  std::vector<double> weights;
};

/// Nonnegative least-squares fit of A(w_k) = sum_n c_n w_k^2/(r_n^2 + w_k^2) at fixed r_n.
/// Atoms whose contribution is at roundoff level (column norm times weight below 1e-10 of
/// the sample norm) are dropped from the returned spectrum.
inline FitResult fit_atoms(const AttenuationSamples& samples, const std::vector<double>& candidates) {
  samples.validate();
  if (candidates.empty()) throw InvalidArgument("fit_atoms: no candidate locations");
  for (double r : candidates)
    if (!(r > 0.0) || !std::isfinite(r))
      throw InvalidArgument("fit_atoms: candidate locations must be positive and finite");

  const auto m = static_cast<Eigen::Index>(samples.omega.size());
  const auto n = static_cast<Eigen::Index>(candidates.size());
  Eigen::MatrixXd A(m, n);
  Eigen::VectorXd b(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const double w = samples.omega[k];
    const double sw = samples.weight.empty() ? 1.0 : std::sqrt(samples.weight[k]);
    b(k) = sw * samples.attenuation[k];
    for (Eigen::Index j = 0; j < n; ++j) {
      const double r = candidates[j];
      A(k, j) = sw * w * w / (r * r + w * w);
    }
  }
  // Column scaling for conditioning, and a collinearity screen.
  Eigen::VectorXd norms = A.colwise().norm();
  for (Eigen::Index j = 0; j < n; ++j)
    if (!(norms(j) > 0.0)) throw NumericError("fit_atoms: zero design column");
  Eigen::MatrixXd An = A;
  for (Eigen::Index j = 0; j < n; ++j) An.col(j) /= norms(j);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (An.col(i).dot(An.col(j)) > 1.0 - 1e-12) {
        std::ostringstream os;
        os << "fit_atoms: degenerate design matrix, columns " << i << " and " << j
           << " (r = " << candidates[i] << ", " << candidates[j] << ") are collinear";
        throw NumericError(os.str());
      }

  const NnlsResult sol = nnls(An, b);
  FitResult out;
  out.spectrum.side = SpectrumSide::attenuation;
  out.candidates = candidates;
  out.weights.resize(candidates.size());
  const double floor = 1e-10 * b.norm();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double c = sol.x(j) > floor ? sol.x(j) / norms(j) : 0.0;
    out.weights[j] = c;
    if (c > 0.0) out.spectrum.atoms.push_back({candidates[j], c});
  }
  out.residual_norm = sol.residual_norm;
  out.sample_norm = b.norm();
  out.iterations = sol.iterations;
  return out;
}

/// One pole -s of Q(p) with Q(p) ~ sum_j coefficients[j-1] / (p + s)^j near it.
struct PoleTerm {
  std::complex<double> s;
  int multiplicity = 1;
  std::vector<std::complex<double>> coefficients;
};

struct RelaxationConversion {
  /// A positive atomic relaxation spectrum exists (simple, real, negative poles with
  /// positive d_m and mu0 >= 0).
  bool atomic = false;
  RationalSpectrum relaxation;
  /// Q(p) = q_inf + sum over poles; always filled.
  double q_inf = 0.0;
  std::vector<PoleTerm> poles;
  std::vector<std::string> diagnostics;
};

/// Rational algebra of Q(p) = rho p^2/B(p)^2 for B(p) = p[1/c0 + sum c_n/(p + r_n)].
inline RelaxationConversion attenuation_to_relaxation(const std::vector<Atom>& nu, double rho,
                                                      double c0) {
  if (!(rho > 0.0) || !(c0 > 0.0)) throw InvalidArgument("conversion needs rho > 0 and c0 > 0");
  SpectralMeasure{nu, std::nullopt}.validate();

  // D(p) = prod (p + r_n); N(p) = D/c0 + sum_n c_n prod_{m != n} (p + r_m); Q = rho D^2/N^2.
  Poly D{1.0};
  for (const auto& a : nu) D = poly_mul(D, {a.location, 1.0});
  Poly N = poly_scale(D, 1.0 / c0);
  for (std::size_t i = 0; i < nu.size(); ++i) {
    Poly term{nu[i].weight};
    for (std::size_t j = 0; j < nu.size(); ++j)
      if (j != i) term = poly_mul(term, {nu[j].location, 1.0});
    N = poly_add(N, term);
  }
  const Poly num = poly_scale(poly_mul(D, D), rho);
  const Poly den = poly_mul(N, N);

  RelaxationConversion out;
  out.q_inf = rho * c0 * c0;

  // Roots of N, clustered at 1e-8 relative; multiplicities double in N^2.
  const auto roots = poly_roots(N);
  std::vector<std::pair<std::complex<double>, int>> clusters;
  for (const auto& z : roots) {
    bool merged = false;
    for (auto& [c, k] : clusters)
      if (std::abs(z - c) <= 1e-8 * std::max(1.0, std::abs(c))) {
        c = (c * static_cast<double>(k) + z) / static_cast<double>(k + 1);
        ++k;
        merged = true;
        break;
      }
    if (!merged) clusters.emplace_back(z, 1);
  }

  for (const auto& [z0, kN] : clusters) {
    const int mult = 2 * kN;
    // Q(p) = h(p)/(p - z0)^mult with h = num / (den / (p - z0)^mult); expand h around z0.
    const auto tn = poly_taylor(num, z0);
    const auto td = poly_taylor(den, z0);
    // den(z0 + e) = e^mult * sum_k td[k + mult] e^k (lower coefficients vanish at the root).
    std::vector<std::complex<double>> dd(td.begin() + std::min<std::size_t>(mult, td.size()),
                                         td.end());
    if (dd.empty() || std::abs(dd[0]) == 0.0)
      throw NumericError("attenuation_to_relaxation: ill-conditioned pole expansion");
    std::vector<std::complex<double>> h(mult);
    for (int k = 0; k < mult; ++k) {
      std::complex<double> acc = k < static_cast<int>(tn.size()) ? tn[k] : 0.0;
      for (int j = 1; j <= k && j < static_cast<int>(dd.size()); ++j) acc -= dd[j] * h[k - j];
      h[k] = acc / dd[0];
    }
    PoleTerm pt;
    pt.s = -z0;
    pt.multiplicity = mult;
    pt.coefficients.resize(mult);
    for (int j = 1; j <= mult; ++j) pt.coefficients[j - 1] = h[mult - j];
    out.poles.push_back(pt);
  }

  // Verify the expansion against direct evaluation.
  for (double p : {0.37, 1.9, 11.0}) {
    std::complex<double> q = out.q_inf;
    for (const auto& pt : out.poles)
      for (int j = 1; j <= pt.multiplicity; ++j)
        q += pt.coefficients[j - 1] / std::pow(std::complex<double>(p) + pt.s, j);
    const double direct = poly_eval(num, p) / poly_eval(den, p);
    if (std::abs(q - direct) > 1e-8 * std::max(1.0, std::abs(direct)))
      throw NumericError("attenuation_to_relaxation: ill-conditioned partial fractions");
  }

  // Positive atomic structure: Q = mu0 + sum d p/(p + s) = (mu0 + sum d) - sum d s/(p + s).
  bool atomic = true;
  double q0 = out.q_inf;
  RationalSpectrum rel;
  rel.side = SpectrumSide::relaxation;
  for (const auto& pt : out.poles) {
    std::ostringstream os;
    os.precision(12);
    os << "pole at p = " << -pt.s.real();
    if (pt.s.imag() != 0.0) os << (pt.s.imag() > 0 ? "-" : "+") << std::abs(pt.s.imag()) << "i";
    os << " of multiplicity " << pt.multiplicity << "; coefficients";
    for (const auto& c : pt.coefficients) os << " " << c.real();
    out.diagnostics.push_back(os.str());
    if (std::abs(pt.s.imag()) > 1e-12 * std::abs(pt.s) || !(pt.s.real() > 0.0)) {
      atomic = false;
      out.diagnostics.emplace_back("pole off the negative real axis");
      continue;
    }
    const double s = pt.s.real();
    const double k1 = pt.coefficients[0].real();
    // D and N have no common roots, so the leading coefficient rho D(z0)^2/N'(z0)^2 of a
    // doubled pole never vanishes: the obstruction is structural, whatever its size.
    if (pt.multiplicity > 1) {
      atomic = false;
      std::ostringstream m;
      m << "higher-order pole at p = " << -s << ": G is not a positive sum of exponentials";
      out.diagnostics.push_back(m.str());
    }
    if (!(k1 < 0.0)) {
      atomic = false;
      out.diagnostics.emplace_back("nonnegative simple-pole coefficient (negative relaxation weight)");
    } else {
      out.diagnostics.emplace_back("negative simple-pole coefficient");
    }
    q0 += k1 / s;
    for (int j = 2; j <= pt.multiplicity; ++j) q0 += pt.coefficients[j - 1].real() / std::pow(s, j);
    if (k1 < 0.0) rel.atoms.push_back({s, -k1 / s});
  }
  if (q0 < -1e-12 * out.q_inf) {
    atomic = false;
    out.diagnostics.emplace_back("negative equilibrium modulus Q(0)");
  }
  out.atomic = atomic;
  if (atomic) {
    rel.mu0 = std::max(q0, 0.0);
    out.relaxation = rel;
  }
  return out;
}

struct PerronOptions {
  /// Relative smoothing parameters eta/r, extrapolated to 0 (Neville).
  std::vector<double> eta = {1e-1, 1e-2, 1e-3, 1e-4};
  unsigned threads = 1;
};

namespace detail {

// Polynomial extrapolation to x = 0 through (x_i, y_i).
inline double neville_at_zero(const std::vector<double>& x, std::vector<double> y) {
  const std::size_t n = x.size();
  for (std::size_t k = 1; k < n; ++k)
    for (std::size_t i = 0; i + k < n; ++i)
      y[i] = (x[i + k] * y[i] - x[i] * y[i + 1]) / (x[i + k] - x[i]);
  return y[0];
}

inline void check_perron(const PerronOptions& o) {
  if (o.eta.empty()) throw InvalidArgument("Stieltjes-Perron recovery needs at least one eta");
  for (std::size_t i = 0; i < o.eta.size(); ++i) {
    if (!(o.eta[i] > 0.0)) throw InvalidArgument("eta values must be positive");
    for (std::size_t j = 0; j < i; ++j)
      if (o.eta[j] == o.eta[i]) throw InvalidArgument("eta values must be distinct");
  }
}

inline void check_r_grid(const std::vector<double>& r) {
  if (r.empty()) throw InvalidArgument("r grid is empty");
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] > 0.0) || !std::isfinite(r[i])) throw InvalidArgument("r grid must be positive");
    if (i > 0 && !(r[i] > r[i - 1])) throw InvalidArgument("r grid must be strictly increasing");
  }
}

// -(1/pi) Im S(-r + i eta r) extrapolated in eta -> 0 and clamped at 0.
inline double perron_point(const std::function<cdouble(cdouble)>& S, double r,
                           const std::vector<double>& eta) {
  std::vector<double> y(eta.size());
  for (std::size_t i = 0; i < eta.size(); ++i)
    y[i] = -S(cdouble(-r, eta[i] * r)).imag() / std::numbers::pi;
  return std::max(0.0, neville_at_zero(eta, y));
}

inline TabulatedDensity make_table(const std::vector<double>& r, const std::vector<double>& v) {
  TabulatedDensity t{r, v, std::nullopt};
  const std::size_t n = r.size();
  if (n >= 2 && v[n - 1] > 0.0 && v[n - 2] > 0.0)
    t.tail_exponent = std::log(v[n - 1] / v[n - 2]) / std::log(r[n - 1] / r[n - 2]);
  return t;
}

}  // namespace detail

/// Single-eta smeared density -(1/pi) Im[b(p)/p] at p = -r + i eta (absolute eta). For atoms
/// this is a sum of Lorentzians of half-width eta.
inline double smeared_density(const AttenuationLaw& law, double r, double eta) {
  if (!(r > 0.0) || !(eta > 0.0)) throw InvalidArgument("smeared_density needs r > 0, eta > 0");
  const cdouble p(-r, eta);
  return -(eval_b(law, p) / p).imag() / std::numbers::pi;
}

struct RecoveredDensity {
  std::vector<double> r;
  std::vector<double> density;
  std::vector<double> eta;
  TabulatedDensity table() const { return detail::make_table(r, density); }
};

/// Stieltjes-Perron recovery of the spectral density of an admissible law on an r-grid.
/// Atoms of measure-backed laws are returned as Lorentzian peaks at the smallest eta.
inline RecoveredDensity recover_density(const AttenuationLaw& law, const std::vector<double>& r,
                                        const PerronOptions& opts = {}) {
  detail::check_r_grid(r);
  detail::check_perron(opts);
  const auto rep = admissibility_check(law);
  if (!rep.pass) throw InvalidArgument("recover_density: law is not admissible");

  AttenuationLaw continuous = law;
  std::vector<Atom> atoms;
  if (const auto* mb = std::get_if<MeasureBacked>(&law)) {
    atoms = mb->nu.atoms;
    continuous = MeasureBacked{SpectralMeasure{{}, mb->nu.density}};
  }
  const double eta_min = *std::min_element(opts.eta.begin(), opts.eta.end());
  auto S = [&](cdouble p) -> cdouble {
    if (is_zero_law(continuous)) return 0.0;
    return eval_b(continuous, p) / p;
  };
  auto point = [&](double x) {
    double v = detail::perron_point(S, x, opts.eta);
    for (const auto& a : atoms) {
      const double e = eta_min * x;
      v += a.weight * e / (std::numbers::pi * ((a.location - x) * (a.location - x) + e * e));
    }
    return v;
  };
  RecoveredDensity out;
  out.r = r;
  out.eta = opts.eta;
  out.density = parallel_map(r, point, opts.threads);
  return out;
}

struct AttenuationRecovery {
  double c0 = 0.0;
  RecoveredDensity nu;
  /// Largest violation of Im B(p) >= 0 found on the branch check (0 when none).
  double branch_violation = 0.0;
};

/// Recovers the attenuation side (front speed and nu density) from a relaxation modulus Q
/// given as a callable with Q(inf) = q_inf: b(p)/p = sqrt(rho/Q(p)) - 1/c0.
inline AttenuationRecovery relaxation_to_attenuation(const std::function<cdouble(cdouble)>& Q,
                                                     double q_inf, double rho,
                                                     const std::vector<double>& r,
                                                     const PerronOptions& opts = {}) {
  if (!(rho > 0.0)) throw InvalidArgument("relaxation_to_attenuation needs rho > 0");
  if (!(q_inf > 0.0)) throw InvalidArgument("relaxation_to_attenuation needs Q(inf) > 0");
  detail::check_r_grid(r);
  detail::check_perron(opts);
  AttenuationRecovery out;
  out.c0 = std::sqrt(q_inf / rho);
  auto S = [&](cdouble p) -> cdouble {
    const cdouble q = Q(p);
    if (q.imag() == 0.0 && q.real() <= 0.0)
      throw NumericError("relaxation_to_attenuation: Q on the branch cut of the square root");
    return std::sqrt(rho / q) - 1.0 / out.c0;
  };
  // Branch check: B(p) = p sqrt(rho/Q(p)) must map the upper half plane into itself.
  for (int k = 1; k <= 7; ++k)
    for (int e = -4; e <= 4; ++e) {
      const cdouble p = std::polar(std::pow(10.0, e), std::numbers::pi * k / 8.0);
      const cdouble B = p * std::sqrt(rho / Q(p));
      if (B.imag() < 0.0)
        out.branch_violation = std::max(out.branch_violation, -B.imag() / std::abs(B));
    }
  if (out.branch_violation > 1e-10)
    throw NumericError("relaxation_to_attenuation: square-root branch maps out of the upper half plane");
  out.nu.r = r;
  out.nu.eta = opts.eta;
  out.nu.density =
      parallel_map(r, [&](double x) { return detail::perron_point(S, x, opts.eta); }, opts.threads);
  return out;
}

/// Atomic relaxation spectrum overload: Q(p) = mu0 + p sum d_m/(p + s_m).
inline AttenuationRecovery relaxation_to_attenuation(const RationalSpectrum& mu, double rho,
                                                     const std::vector<double>& r,
                                                     const PerronOptions& opts = {}) {
  SpectralMeasure{mu.atoms, std::nullopt}.validate();
  if (!(mu.mu0 >= 0.0)) throw InvalidArgument("relaxation_to_attenuation needs mu0 >= 0");
  double total = mu.mu0;
  for (const auto& a : mu.atoms) total += a.weight;
  auto Q = [&](cdouble p) {
    cdouble q = mu.mu0;
    for (const auto& a : mu.atoms) q += a.weight * p / (p + a.location);
    return q;
  };
  return relaxation_to_attenuation(Q, total, rho, r, opts);
}

/// Model overload: Q from eval_Q (relaxation spectrum if present, else rho p^2/B^2) with
/// Q(inf) = rho c0^2.
inline AttenuationRecovery relaxation_to_attenuation(const MaterialModel& m,
                                                     const std::vector<double>& r,
                                                     const PerronOptions& opts = {}) {
  m.validate();
  return relaxation_to_attenuation([&](cdouble p) { return eval_Q(m, p); }, elastic_modulus(m),
                                   m.rho, r, opts);
}

/// Default r-grid for relaxation_to_attenuation from an atomic relaxation spectrum:
/// log-spaced over [1e-16 s_min, 1e3 s_max], graded geometrically towards the support edges
/// of the recovered density (the poles -s_m and the zeros of Q on the negative axis), where
/// it vanishes like a square root. The table is zero below its first node, so the lower end
/// must sit far below s_min: an r^{-1/2} singularity at 0 leaves out a mass of about
/// (2/pi) sqrt(r_first).
inline std::vector<double> default_r_grid(const RationalSpectrum& mu, int per_decade = 80) {
  double lo = 1.0;
  double hi = 1.0;
  if (!mu.atoms.empty()) {
    lo = hi = mu.atoms.front().location;
    for (const auto& a : mu.atoms) {
      lo = std::min(lo, a.location);
      hi = std::max(hi, a.location);
    }
  }
  std::vector<double> grid = detail::log_grid(1e-16 * lo, 1e3 * hi, per_decade);

  // Q = [mu0 prod (p + s) + p sum d prod_{k != m} (p + s_k)] / prod (p + s).
  std::vector<double> edges;
  Poly num{mu.mu0};
  for (const auto& a : mu.atoms) num = poly_mul(num, {a.location, 1.0});
  for (std::size_t m = 0; m < mu.atoms.size(); ++m) {
    Poly term{0.0, mu.atoms[m].weight};
    for (std::size_t k = 0; k < mu.atoms.size(); ++k)
      if (k != m) term = poly_mul(term, {mu.atoms[k].location, 1.0});
    num = poly_add(num, term);
    edges.push_back(mu.atoms[m].location);
  }
  for (const auto& z : poly_roots(poly_trim(num)))
    if (std::abs(z.imag()) <= 1e-12 * std::abs(z) && z.real() < 0.0) edges.push_back(-z.real());
  for (double e : edges)
    for (int j = 4; j <= 40; ++j) {
      const double d = std::pow(10.0, -0.25 * j);
      grid.push_back(e * (1.0 - d));
      grid.push_back(e * (1.0 + d));
    }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [](double a, double b) { return b - a <= 1e-14 * b; }),
             grid.end());
  return grid;
}

}  // namespace viscowave
