#pragma once

#include <Eigen/Dense>

#include <limits>
#include <vector>

namespace fjpop {

struct NnlsResult {
  Eigen::VectorXd x;
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Lawson-Hanson active-set solver for min ||A x - b|| subject to x >= 0.
///
/// The entering variable is the one with the largest positive dual entry;
/// ties go to the smallest index.
inline NnlsResult nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, int max_iter = 0,
                       double tol = 0.0) {
  const Eigen::Index n = A.cols();
  if (max_iter <= 0) max_iter = static_cast<int>(3 * n + 30);
  if (tol <= 0.0) tol = 10.0 * std::numeric_limits<double>::epsilon() * A.norm() * std::max<Eigen::Index>(A.rows(), n);

  NnlsResult res;
  res.x = Eigen::VectorXd::Zero(n);
  if (n == 0) {
    res.residual_norm = b.norm();
    res.converged = true;
    return res;
  }
  std::vector<bool> passive(static_cast<std::size_t>(n), false);

  auto solve_passive = [&](Eigen::VectorXd& z) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < n; ++j)
      if (passive[j]) idx.push_back(j);
    Eigen::MatrixXd Ap(A.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) Ap.col(static_cast<Eigen::Index>(k)) = A.col(idx[k]);
    Eigen::VectorXd zp = Ap.colPivHouseholderQr().solve(b);
    z = Eigen::VectorXd::Zero(n);
    for (std::size_t k = 0; k < idx.size(); ++k) z[idx[k]] = zp[static_cast<Eigen::Index>(k)];
  };

  Eigen::VectorXd w = A.transpose() * (b - A * res.x);
  while (res.iterations < max_iter) {
    Eigen::Index enter = -1;
    double best = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[j] && w[j] > best) {
        best = w[j];
        enter = j;
      }
    }
    if (enter < 0) {
      res.converged = true;
      break;
    }
    passive[enter] = true;
    ++res.iterations;

    Eigen::VectorXd z;
    while (true) {
      solve_passive(z);
      bool feasible = true;
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[j] && z[j] <= 0.0) feasible = false;
      if (feasible) break;
      double alpha = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && z[j] <= 0.0) {
          double denom = res.x[j] - z[j];
          if (denom > 0.0) alpha = std::min(alpha, res.x[j] / denom);
        }
      }
      if (!std::isfinite(alpha)) alpha = 0.0;
      res.x += alpha * (z - res.x);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && res.x[j] <= tol) {
          passive[j] = false;
          res.x[j] = 0.0;
        }
      }
      if (++res.iterations >= max_iter) break;
    }
    res.x = z.cwiseMax(0.0);
    w = A.transpose() * (b - A * res.x);
  }
  res.residual_norm = (A * res.x - b).norm();
  return res;
}

}  // namespace fjpop
