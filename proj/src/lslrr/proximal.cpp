#include "lslrr/proximal.hpp"

#include <algorithm>
#include <cmath>

#include "lslrr/error.hpp"

namespace lslrr {

SvdFactors thin_svd(const Matrix& a) {
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

Matrix svt(const Matrix& a, double tau) {
  if (tau < 0.0) throw InvalidInputError("svt threshold must be non-negative");
  if (a.size() == 0) return a;
  if (tau == 0.0) return a;

  const SvdFactors f = thin_svd(a);
  const double floor = 1e-12 * (f.singular_values.size() ? f.singular_values(0) : 0.0);
  Index keep = 0;
  Vector shrunk(f.singular_values.size());
  for (Index i = 0; i < f.singular_values.size(); ++i) {
    const double s = f.singular_values(i);
    shrunk(i) = (s > floor) ? std::max(s - tau, 0.0) : 0.0;
    if (shrunk(i) > 0.0) keep = i + 1;
  }
  if (keep == 0) return Matrix::Zero(a.rows(), a.cols());
  return f.U.leftCols(keep) * shrunk.head(keep).asDiagonal() * f.V.leftCols(keep).transpose();
}

Matrix weighted_nonneg_shrink(const Matrix& v, const Matrix& w) {
  if (v.rows() != w.rows() || v.cols() != w.cols()) {
    throw InvalidInputError("weighted_nonneg_shrink: weight shape does not match input");
  }
  if (w.size() && w.minCoeff() < 0.0) {
    throw InvalidInputError("weighted_nonneg_shrink: weights must be non-negative");
  }
  // For w >= 0 the negative branch of the soft threshold is clipped anyway.
  return (v - w).cwiseMax(0.0);
}

Matrix l21_shrink(const Matrix& g, double tau) {
  if (tau < 0.0) throw InvalidInputError("l21_shrink threshold must be non-negative");
  Matrix e = Matrix::Zero(g.rows(), g.cols());
  for (Index j = 0; j < g.cols(); ++j) {
    const double norm = g.col(j).norm();
    if (norm > tau) e.col(j) = ((norm - tau) / norm) * g.col(j);
  }
  return e;
}

}  // namespace lslrr
