#pragma once

// Lawson-Hanson active-set nonnegative least squares: min ||A x - b||_2 subject to x >= 0.

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "viscowave/error.hpp"

namespace viscowave {

struct NnlsResult {
  Eigen::VectorXd x;
  double residual_norm = 0.0;
  int iterations = 0;
};

inline NnlsResult nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, int max_iter = 0,
                       double tol = 0.0) {
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  if (b.size() != m) throw InvalidArgument("nnls: dimension mismatch");
  if (max_iter <= 0) max_iter = static_cast<int>(3 * n + 30);
  if (tol <= 0.0)
    tol = 10.0 * std::numeric_limits<double>::epsilon() * A.norm() * std::max(m, n) *
          std::max(1.0, b.norm());

  NnlsResult out;
  out.x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(n, false);
  Eigen::VectorXd w = A.transpose() * (b - A * out.x);

  auto solve_passive = [&](Eigen::VectorXd& z) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < n; ++j)
      if (passive[j]) idx.push_back(j);
    Eigen::MatrixXd Ap(m, static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) Ap.col(static_cast<Eigen::Index>(k)) = A.col(idx[k]);
    const Eigen::VectorXd zp = Ap.colPivHouseholderQr().solve(b);
    z = Eigen::VectorXd::Zero(n);
    for (std::size_t k = 0; k < idx.size(); ++k) z(idx[k]) = zp(static_cast<Eigen::Index>(k));
  };

  while (out.iterations < max_iter) {
    // Most promising inactive variable.
    Eigen::Index jmax = -1;
    double wmax = tol;
    for (Eigen::Index j = 0; j < n; ++j)
      if (!passive[j] && w(j) > wmax) {
        wmax = w(j);
        jmax = j;
      }
    if (jmax < 0) break;
    passive[jmax] = true;
    ++out.iterations;

    Eigen::VectorXd z;
    for (int inner = 0; inner < 3 * n + 30; ++inner) {
      solve_passive(z);
      bool feasible = true;
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[j] && z(j) <= 0.0) feasible = false;
      if (feasible) break;
      // Step back towards the feasible region and drop the variables that hit zero.
      double alpha = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[j] && z(j) <= 0.0) {
          const double gap = out.x(j) - z(j);
          alpha = std::min(alpha, gap > 0.0 ? out.x(j) / gap : 0.0);
        }
      out.x += alpha * (z - out.x);
      const double xtol = 1e-14 * out.x.cwiseAbs().maxCoeff();
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[j] && out.x(j) <= xtol) {
          passive[j] = false;
          out.x(j) = 0.0;
        }
    }
    out.x = z;
    w = A.transpose() * (b - A * out.x);
  }
  for (Eigen::Index j = 0; j < n; ++j) out.x(j) = std::max(out.x(j), 0.0);
  out.residual_norm = (A * out.x - b).norm();
  return out;
}

}  // namespace viscowave
