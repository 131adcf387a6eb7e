#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace lslrr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using Index = Eigen::Index;

// Pixels stored column-wise: spectra is bands x pixels, coords is 2 x pixels.
// Labels use 1..class_count, 0 marks an unlabeled pixel. An empty label
// vector means the dataset carries no labels at all.
struct PixelDataset {
  Matrix spectra;
  Matrix coords;
  std::vector<int> labels;
  int class_count = 0;

  Index band_count() const { return spectra.rows(); }
  Index pixel_count() const { return spectra.cols(); }
  bool has_labels() const { return !labels.empty(); }

  // Throws InvalidInputError if shapes or label ranges are inconsistent.
  void validate() const;
};

// class_count is derived from the largest label.
PixelDataset make_dataset(Matrix spectra, Matrix coords, std::vector<int> labels = {});

struct Split {
  // train_indices[l] holds the pixels of class l + 1, ascending.
  std::vector<std::vector<Index>> train_indices;
  std::vector<Index> test_indices;
  std::vector<Index> class_sizes;

  int class_count() const { return static_cast<int>(class_sizes.size()); }
  Index train_count() const;
  Index test_count() const { return static_cast<Index>(test_indices.size()); }

  // Class-ordered concatenation of train_indices: the dictionary columns.
  std::vector<Index> ordered_train() const;
  // ordered_train() followed by test_indices: the data columns.
  std::vector<Index> ordered_all() const;
};

// Per-row min-max scaling of spectra and coords into [0,1]. Constant rows
// become zero. Idempotent.
PixelDataset normalize(const PixelDataset& ds);

// Draws max(1, round(train_fraction * count_l)) training pixels per class
// without replacement; every other labeled pixel becomes a test pixel.
Split stratified_split(const PixelDataset& ds, double train_fraction, std::uint64_t seed);

// Column gather helper.
Matrix select_columns(const Matrix& m, const std::vector<Index>& cols);

}  // namespace lslrr
