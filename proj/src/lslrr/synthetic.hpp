#pragma once

#include <cstdint>
#include <vector>

#include "lslrr/data_model.hpp"

namespace lslrr {

struct SyntheticSpec {
  int band_count = 30;
  int classes = 3;
  int subspace_dim = 3;
  int pixels_per_class = 50;
  int grid_side = 0;  // 0: smallest square that fits every pixel
  double noise_sigma = 0.01;
  double corrupt_fraction = 0.0;
  std::uint64_t seed = 0;

  int resolved_grid_side() const;
  void validate() const;  // ConfigError when infeasible
};

struct SyntheticData {
  PixelDataset dataset;             // un-normalized; coords are integer (row, col)
  std::vector<Matrix> bases;        // planted orthonormal basis per class, d x r
  std::vector<Index> corrupted;     // columns replaced by gross outliers, ascending
};

// Pixels of class l are U_l * g with g ~ N(0, I), U_l a disjoint slice of one
// orthonormal frame, so the class subspaces are independent. Classes occupy
// consecutive runs of a row-major square grid. Clean data, noise and
// corruption draw from separate streams: changing corrupt_fraction leaves
// every uncorrupted column bit-identical.
SyntheticData generate_raw(const SyntheticSpec& spec);

// generate_raw followed by normalize.
PixelDataset generate(const SyntheticSpec& spec);

}  // namespace lslrr
