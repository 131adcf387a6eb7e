#pragma once

#include <vector>

#include "lslrr/data_model.hpp"
#include "lslrr/solver.hpp"

namespace lslrr {

// Non-owning view over a set of pixels: spectra (bands x k), coords (2 x k).
struct PixelView {
  Eigen::Ref<const Matrix> spectra;
  Eigen::Ref<const Matrix> coords;

  Index size() const { return spectra.cols(); }
};

// ||x_i - x_j||^2 + m * ||l_i - l_j||^2 for every (row pixel, column pixel).
Matrix squared_combined_distances(const PixelView& rows, const PixelView& cols, double m_param);

struct LocalityMatrix {
  Matrix values;  // atoms x samples
  double m_param = 0.0;
};

// Spectral-spatial distance from each training pixel to every pixel of `all`
// (training pixels first, in the same order as `train`).
LocalityMatrix build_locality_matrix(const PixelView& train, const PixelView& all, double m_param);

// Gaussian similarity between training and test pixels; entries whose
// squared combined distance exceeds theta are exactly zero.
Matrix build_q_test(const PixelView& train, const PixelView& test, double m_param, double sigma,
                    double theta);

struct KernelParams {
  double sigma = 1.0;
  double theta = 1.0;
};

// theta: 20th percentile (nearest rank) of all squared train-test distances.
// sigma: mean of the non-zero squared distances that do not exceed theta.
KernelParams default_kernel_params(const PixelView& train, const PixelView& test, double m_param);

// Fills in cfg.sigma / cfg.theta when unset.
KernelParams resolve_kernel_params(const PixelView& train, const PixelView& test,
                                   const SolverConfig& cfg);

// Block-diagonal target for the training representation: one locality
// regularized solve per class with that class's pixels as both data and
// dictionary. Inner solves run with 10x the tolerance and half the iterations
// of `cfg`.
Matrix build_q_train(const PixelView& train, const std::vector<Index>& class_sizes,
                     const SolverConfig& cfg);

struct StructureMatrix {
  Matrix values;  // [Q_train, Q_test], atoms x samples
  Index train_count = 0;
  double sigma = 0.0;
  double theta = 0.0;

  auto train_block() const { return values.leftCols(train_count); }
  auto test_block() const { return values.rightCols(values.cols() - train_count); }
};

StructureMatrix build_structure_matrix(const PixelView& train, const PixelView& test,
                                       const std::vector<Index>& class_sizes,
                                       const SolverConfig& cfg);

}  // namespace lslrr
