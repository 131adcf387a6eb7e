#pragma once

#include "lslrr/data_model.hpp"

namespace lslrr {

struct SvdFactors {
  Matrix U;
  Vector singular_values;  // non-increasing
  Matrix V;
};

// Thin SVD, singular values sorted non-increasing.
SvdFactors thin_svd(const Matrix& a);

// Singular value thresholding: argmin_J tau*||J||_* + 0.5*||J - A||_F^2.
// Singular values below 1e-12 * sigma_max are dropped before thresholding.
Matrix svt(const Matrix& a, double tau);

// Entrywise max(0, soft(v, w)): argmin_{H >= 0} sum W_ij |H_ij| + 0.5*||H - V||_F^2.
Matrix weighted_nonneg_shrink(const Matrix& v, const Matrix& w);

// Column-wise group shrinkage: argmin_E tau*||E||_{2,1} + 0.5*||E - G||_F^2.
Matrix l21_shrink(const Matrix& g, double tau);

}  // namespace lslrr
