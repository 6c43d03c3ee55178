#pragma once

// Dense polynomials with real coefficients in ascending order, c[0] + c[1] p + ...

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "viscowave/error.hpp"

namespace viscowave {

using Poly = std::vector<double>;

inline Poly poly_trim(Poly a) {
  while (a.size() > 1 && a.back() == 0.0) a.pop_back();
  return a;
}

inline Poly poly_add(const Poly& a, const Poly& b) {
  Poly out(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

inline Poly poly_scale(Poly a, double s) {
  for (double& c : a) c *= s;
  return a;
}

template <class T>
T poly_eval(const Poly& a, T x) {
  T acc{};
  for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * x + *it;
  return acc;
}

inline Poly poly_derivative(const Poly& a) {
  if (a.size() <= 1) return {0.0};
  Poly out(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) out[i - 1] = a[i] * static_cast<double>(i);
  return out;
}

/// Taylor coefficients of a around x0: a(x0 + h) = sum_k out[k] h^k.
inline std::vector<std::complex<double>> poly_taylor(const Poly& a, std::complex<double> x0) {
  std::vector<std::complex<double>> c(a.begin(), a.end());
  const std::size_t n = c.size();
  // Repeated synthetic division by (p - x0).
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = n - 1; i > k; --i) c[i - 1] += x0 * c[i];
  return c;
}

/// All complex roots via eigenvalues of the companion matrix, polished by Newton steps.
inline std::vector<std::complex<double>> poly_roots(const Poly& a_in) {
  const Poly a = poly_trim(a_in);
  const int n = static_cast<int>(a.size()) - 1;
  if (n <= 0) return {};
  if (a.back() == 0.0) throw NumericError("poly_roots: zero leading coefficient");
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) C(i, n - 1) = -a[i] / a.back();
  Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
  if (es.info() != Eigen::Success) throw NumericError("poly_roots: eigenvalue iteration failed");
  const Poly da = poly_derivative(a);
  std::vector<std::complex<double>> roots(n);
  for (int i = 0; i < n; ++i) {
    std::complex<double> z = es.eigenvalues()(i);
    for (int it = 0; it < 3; ++it) {
      const std::complex<double> d = poly_eval(da, z);
      if (std::abs(d) == 0.0) break;
      const std::complex<double> step = poly_eval(a, z) / d;
      if (!std::isfinite(std::abs(step)) || std::abs(step) > 1e-6 * std::max(1.0, std::abs(z)))
        break;  // multiple root or far off: keep the eigenvalue
      z -= step;
    }
    roots[i] = z;
  }
  std::sort(roots.begin(), roots.end(), [](auto x, auto y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return roots;
}

}  // namespace viscowave
