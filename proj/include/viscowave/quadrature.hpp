#pragma once

// Adaptive Gauss-Kronrod quadrature, Wynn's epsilon algorithm and a term-by-term
// series summer. Everything is templated on the integrand's value type so the same
// machinery serves real kernels and complex Stieltjes/Bromwich integrands.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <type_traits>
#include <vector>

namespace viscowave {

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_intervals = 2000;
};

template <class T>
struct QuadratureResult {
  T value{};
  double error = 0.0;
  int evaluations = 0;
  bool converged = true;
};

namespace detail {

// Kronrod 21-point abscissae on [0,1] (symmetric), with the embedded 10-point Gauss rule
// using the odd-indexed nodes.
inline constexpr std::array<double, 11> kKronrodNodes = {
    0.000000000000000000000000000000000, 0.148874338981631210884826001129720,
    0.294392862701460198131126603103866, 0.433395394129247190799265943165784,
    0.562757134668604683339000099272694, 0.679409568299024406234327365114874,
    0.780817726586416897063717578345042, 0.865063366688984510732096688423493,
    0.930157491355708226001207180059508, 0.973906528517171720077964012084452,
    0.995657163025808080735527280689003};

inline constexpr std::array<double, 11> kKronrodWeights = {
    0.149445554002916905664936468389821, 0.147739104901338491374841515972068,
    0.142775938577060080797094273138717, 0.134709217311473325928054001771707,
    0.123491976262065851077600962614960, 0.109387158802297641899210590325805,
    0.093125454583697605535065465083366, 0.075039674810919952767043140916190,
    0.054755896574351996031381300244580, 0.032558162307964727478818972459390,
    0.011694638867371874278064396062192};

// Gauss weights for nodes kKronrodNodes[1], [3], [5], [7], [9].
inline constexpr std::array<double, 5> kGaussWeights = {
    0.295524224714752870173892994651338, 0.269266719309996355091226921569469,
    0.219086362515982043995534934228163, 0.149451349150580593145776339657697,
    0.066671344308688137593568809893332};

template <class T>
double magnitude(const T& v) {
  return std::abs(v);
}

template <class T>
struct Panel {
  double a;
  double b;
  T value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <class T, class F>
Panel<T> kronrod21(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const T fc = f(center);
  T kronrod = fc * kKronrodWeights[0];
  T gauss{};
  for (std::size_t i = 1; i < kKronrodNodes.size(); ++i) {
    const double dx = half * kKronrodNodes[i];
    const T sum = f(center - dx) + f(center + dx);
    kronrod += sum * kKronrodWeights[i];
    if (i % 2 == 1) gauss += sum * kGaussWeights[i / 2];
  }
  kronrod *= half;
  gauss *= half;
  double err = magnitude(T(kronrod - gauss));
  // QUADPACK-style sharpening of the raw |K - G| estimate.
  if (err > 0.0) {
    const double scaled = std::pow(200.0 * err / std::max(magnitude(kronrod), 1e-300), 1.5);
    err = std::max(err * std::min(1.0, scaled), 50.0 * std::numeric_limits<double>::epsilon() *
                                                     magnitude(kronrod));
  }
  return {a, b, kronrod, err};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (G10/K21) quadrature of f over [a,b]. Optional interior
/// breakpoints seed the panel list; panels with the largest error estimate are bisected
/// until the total estimate drops below max(abs_tol, rel_tol * |I|).
template <class F>
auto integrate(F&& f, double a, double b, const QuadratureOptions& opts = {},
               std::span<const double> breakpoints = {})
    -> QuadratureResult<std::decay_t<decltype(f(a))>> {
  using T = std::decay_t<decltype(f(a))>;
  QuadratureResult<T> out;
  if (a == b) return out;
  const double sign = b > a ? 1.0 : -1.0;
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);

  std::vector<double> cuts{lo};
  for (double x : breakpoints)
    if (x > lo && x < hi) cuts.push_back(x);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<detail::Panel<T>> queue;
  T total{};
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    auto p = detail::kronrod21<T>(f, cuts[i], cuts[i + 1]);
    out.evaluations += 21;
    total += p.value;
    total_err += p.error;
    queue.push(p);
  }

  auto target = [&] { return std::max(opts.abs_tol, opts.rel_tol * detail::magnitude(total)); };
  while (total_err > target()) {
    if (static_cast<int>(queue.size()) >= opts.max_intervals) {
      out.converged = false;
      break;
    }
    auto worst = queue.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      out.converged = false;  // panel width at machine resolution
      break;
    }
    queue.pop();
    auto left = detail::kronrod21<T>(f, worst.a, mid);
    auto right = detail::kronrod21<T>(f, mid, worst.b);
    out.evaluations += 42;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
  }

  // Re-sum to shed accumulated cancellation from the incremental updates.
  T resum{};
  double err = 0.0;
  while (!queue.empty()) {
    resum += queue.top().value;
    err += queue.top().error;
    queue.pop();
  }
  out.value = sign * resum;
  out.error = err;
  return out;
}

/// Wynn's epsilon algorithm applied to a sequence of partial sums. Returns the entry of the
/// highest even column at the bottom of the table.
template <class T>
T wynn_epsilon(std::span<const T> sums) {
  const std::size_t n = sums.size();
  if (n < 3) return n == 0 ? T{} : sums.back();
  std::vector<T> prev(n, T{});  // column k-1
  std::vector<T> cur(sums.begin(), sums.end());  // column k
  T best = sums.back();
  for (std::size_t k = 1; k < n; ++k) {
    std::vector<T> next(n - k);
    bool broke = false;
    for (std::size_t i = 0; i + k < n; ++i) {
      const T diff = cur[i + 1] - cur[i];
      const double scale = std::max(detail::magnitude(cur[i + 1]), detail::magnitude(cur[i]));
      if (detail::magnitude(diff) <= 1e-14 * scale || detail::magnitude(diff) == 0.0) {
        broke = true;
        break;
      }
      next[i] = prev[i + 1] + T(1.0) / diff;
    }
    if (broke) break;
    prev = std::move(cur);
    cur = std::move(next);
    if (k % 2 == 0) best = cur.back();
  }
  return best;
}

struct SeriesOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_terms = 4000;
  int min_terms = 3;
  bool use_wynn = true;
  bool use_geometric = true;
};

template <class T>
struct SeriesResult {
  T value{};
  double error = 0.0;
  int terms = 0;
  bool converged = false;
  bool extrapolated = false;
};

/// Sums terms produced by next(k) = QuadratureResult<T> for k = 0,1,2,... until the
/// remainder is negligible. A stable geometric decay of the terms is closed off with its
/// exact geometric remainder; otherwise Wynn's epsilon extrapolates the partial sums
/// (alternating tails of oscillatory integrals).
template <class T, class Next>
SeriesResult<T> sum_series(Next&& next, const SeriesOptions& opts = {}) {
  SeriesResult<T> out;
  std::vector<T> partial;
  std::vector<T> terms;
  T sum{};
  double quad_err = 0.0;
  T wynn_prev{}, wynn_prev2{};
  int wynn_count = 0;

  for (int k = 0; k < opts.max_terms; ++k) {
    const auto term = next(k);
    sum += term.value;
    quad_err += term.error;
    terms.push_back(term.value);
    partial.push_back(sum);
    out.terms = k + 1;
    const double target = std::max(opts.abs_tol, opts.rel_tol * detail::magnitude(sum));

    if (k + 1 >= opts.min_terms && k >= 2) {
      const T& t0 = terms[k - 2];
      const T& t1 = terms[k - 1];
      const T& t2 = terms[k];
      const double m1 = detail::magnitude(t1);
      const double m2 = detail::magnitude(t2);

      // Negligible, decaying terms.
      if (m2 <= target && m1 <= target && detail::magnitude(t0) <= 10.0 * target) {
        out.value = sum;
        out.error = quad_err + m2;
        out.converged = true;
        return out;
      }
      // Geometric tail with a stable ratio.
      if (opts.use_geometric && m1 > 0.0 && detail::magnitude(t0) > 0.0) {
        const T q1 = t1 / t0;
        const T q2 = t2 / t1;
        const double aq = detail::magnitude(q2);
        if (aq < 0.95 && detail::magnitude(T(q2 - q1)) < 1e-3 * std::max(aq, 1e-300)) {
          const T remainder = t2 * q2 / (T(1.0) - q2);
          const double rem_err = detail::magnitude(T(q2 - q1)) * m2 / ((1.0 - aq) * (1.0 - aq));
          if (detail::magnitude(remainder) <= 1e3 * target && rem_err <= target) {
            out.value = sum + remainder;
            out.error = quad_err + rem_err;
            out.converged = true;
            out.extrapolated = true;
            return out;
          }
        }
      }
    }

    if (opts.use_wynn && partial.size() >= 6) {
      const std::size_t window = std::min<std::size_t>(partial.size(), 40);
      const T est = wynn_epsilon<T>(std::span<const T>(partial).last(window));
      ++wynn_count;
      if (wynn_count >= 3) {
        const double d1 = detail::magnitude(T(est - wynn_prev));
        const double d2 = detail::magnitude(T(wynn_prev - wynn_prev2));
        const double tgt = std::max(opts.abs_tol, opts.rel_tol * detail::magnitude(est));
        if (d1 <= tgt && d2 <= tgt) {
          out.value = est;
          out.error = quad_err + d1 + d2;
          out.converged = true;
          out.extrapolated = true;
          return out;
        }
      }
      wynn_prev2 = wynn_prev;
      wynn_prev = est;
    }
  }
  out.value = wynn_count > 0 ? wynn_prev : sum;
  out.error = quad_err + (terms.empty() ? 0.0 : detail::magnitude(terms.back()));
  out.converged = false;
  return out;
}

}  // namespace viscowave
