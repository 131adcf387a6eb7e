// Reference implementations used to cross-check the library. None of them
// share code with the routines they verify.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using Matrix = Eigen::MatrixXd;

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols,
                            double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = n(rng);
  return m;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Nuclear norm through the eigenvalues of A'A, no SVD involved.
inline double nuclear_norm(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.transpose() * a);
  return es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
}

inline double svt_objective(const Matrix& j, const Matrix& a, double tau) {
  return tau * nuclear_norm(j) + 0.5 * (j - a).squaredNorm();
}

// argmin tau*||J||_* + 0.5||J - A||^2 via the factored form
// ||J||_* = min_{J = PQ'} (||P||^2 + ||Q||^2) / 2, solved by alternating
// ridge regressions.
inline Matrix svt_factored(const Matrix& a, double tau, std::uint64_t seed = 7,
                           int iters = 20000) {
  const Eigen::Index k = std::min(a.rows(), a.cols());
  std::mt19937_64 rng(seed);
  Matrix p = random_matrix(rng, a.rows(), k);
  Matrix q = random_matrix(rng, a.cols(), k);
  const Matrix eye = Matrix::Identity(k, k);
  Matrix prev = p * q.transpose();
  for (int it = 0; it < iters; ++it) {
    p = (a * q) * (q.transpose() * q + tau * eye).inverse();
    q = (a.transpose() * p) * (p.transpose() * p + tau * eye).inverse();
    Matrix cur = p * q.transpose();
    if (it > 50 && (cur - prev).cwiseAbs().maxCoeff() < 1e-14) return cur;
    prev = std::move(cur);
  }
  return prev;
}

// Bisection on the sign of a non-decreasing derivative over [lo, hi].
inline double bisect_increasing(const std::function<double(double)>& deriv, double lo, double hi) {
  if (deriv(lo) >= 0.0) return lo;
  for (int k = 0; k < 200 && hi - lo > 0.0; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (deriv(mid) < 0.0) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Scalar argmin_{h >= 0} w|h| + 0.5(h - v)^2: scan a 1e-4 grid, then bisect
// the derivative w + h - v inside the winning cell.
inline double shrink_scalar(double v, double w) {
  auto f = [&](double h) { return w * std::abs(h) + 0.5 * (h - v) * (h - v); };
  const double hi = std::max(v, 0.0) + 1.0;
  double best = 0.0, best_f = f(0.0);
  for (double h = 0.0; h <= hi; h += 1e-4) {
    if (f(h) < best_f) best_f = f(h), best = h;
  }
  return bisect_increasing([&](double h) { return w + h - v; }, std::max(0.0, best - 1e-4), best + 1e-4);
}

// argmin tau||e|| + 0.5||e - g||^2 for one column. By rotational invariance the
// minimizer is s * g/||g|| with s in [0, ||g||]; s comes from a line search
// on the derivative tau + s - ||g||.
inline Eigen::VectorXd l21_column(const Eigen::VectorXd& g, double tau) {
  const double n = g.norm();
  if (n == 0.0) return Eigen::VectorXd::Zero(g.size());
  const double s = bisect_increasing([&](double t) { return tau + t - n; }, 0.0, n);
  return (s / n) * g;
}

// Off-block share of sum |Z_ij|, with rows grouped by row_class and columns
// labelled by col_class.
inline double off_block_share(const Matrix& z, const std::vector<int>& row_class,
                              const std::vector<int>& col_class) {
  double off = 0.0, total = 0.0;
  for (Eigen::Index j = 0; j < z.cols(); ++j) {
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
      const double v = std::abs(z(i, j));
      total += v;
      if (row_class[static_cast<std::size_t>(i)] != col_class[static_cast<std::size_t>(j)]) off += v;
    }
  }
  return total > 0.0 ? off / total : 0.0;
}

}  // namespace oracle
