#include <gtest/gtest.h>

#include <numeric>
#include <set>

#include "lslrr/data_model.hpp"
#include "lslrr/error.hpp"
#include "oracles.hpp"

using lslrr::Index;
using lslrr::Matrix;

namespace {

lslrr::PixelDataset labelled(const std::vector<int>& counts) {
  std::vector<int> labels;
  for (std::size_t c = 0; c < counts.size(); ++c) labels.insert(labels.end(), counts[c], static_cast<int>(c) + 1);
  const auto n = static_cast<Index>(labels.size());
  Matrix spectra = Matrix::Random(3, n);
  Matrix coords(2, n);
  for (Index j = 0; j < n; ++j) coords(0, j) = static_cast<double>(j / 4), coords(1, j) = static_cast<double>(j % 4);
  return lslrr::make_dataset(spectra, coords, labels);
}

}  // namespace

TEST(Normalize, MinMaxPerRow) {
  Matrix s(2, 3);
  s << 2, 4, 6, 5, 5, 5;
  const auto ds = lslrr::normalize(lslrr::make_dataset(s, Matrix::Zero(2, 3)));
  EXPECT_EQ(ds.spectra(0, 0), 0.0);
  EXPECT_EQ(ds.spectra(0, 1), 0.5);
  EXPECT_EQ(ds.spectra(0, 2), 1.0);
  EXPECT_EQ(ds.spectra.row(1).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Normalize, RandomRowsSpanUnitInterval) {
  std::mt19937_64 rng(1);
  const auto ds = lslrr::normalize(
      lslrr::make_dataset(oracle::random_matrix(rng, 3, 4), oracle::random_matrix(rng, 2, 4)));
  for (const Matrix* m : {&ds.spectra, &ds.coords}) {
    for (Index r = 0; r < m->rows(); ++r) {
      double lo = 1e300, hi = -1e300;
      for (Index c = 0; c < m->cols(); ++c) lo = std::min(lo, (*m)(r, c)), hi = std::max(hi, (*m)(r, c));
      EXPECT_EQ(lo, 0.0);
      EXPECT_EQ(hi, 1.0);
    }
  }
}

TEST(Normalize, Idempotent) {
  std::mt19937_64 rng(2);
  const auto once = lslrr::normalize(
      lslrr::make_dataset(oracle::random_matrix(rng, 6, 9, 3.0), oracle::random_matrix(rng, 2, 9, 5.0)));
  const auto twice = lslrr::normalize(once);
  EXPECT_EQ(once.spectra, twice.spectra);
  EXPECT_EQ(once.coords, twice.coords);
}

TEST(Normalize, RejectsEmpty) {
  EXPECT_THROW(lslrr::normalize(lslrr::PixelDataset{}), lslrr::InvalidInputError);
}

TEST(Dataset, ValidateCatchesShapeAndLabels) {
  EXPECT_THROW(lslrr::make_dataset(Matrix::Zero(2, 3), Matrix::Zero(2, 4)), lslrr::InvalidInputError);
  EXPECT_THROW(lslrr::make_dataset(Matrix::Zero(2, 3), Matrix::Zero(2, 3), {1, 2}), lslrr::InvalidInputError);
  EXPECT_THROW(lslrr::make_dataset(Matrix::Zero(2, 3), Matrix::Zero(2, 3), {1, -1, 2}), lslrr::InvalidInputError);
  EXPECT_EQ(lslrr::make_dataset(Matrix::Zero(2, 3), Matrix::Zero(2, 3), {0, 3, 1}).class_count, 3);
}

TEST(StratifiedSplit, RoundingPerClass) {
  const auto s = lslrr::stratified_split(labelled({10, 10, 10}), 0.1, 0);
  EXPECT_EQ(s.class_sizes, (std::vector<Index>{1, 1, 1}));
  EXPECT_EQ(s.test_count(), 27);

  const auto t = lslrr::stratified_split(labelled({4, 6}), 0.5, 0);
  EXPECT_EQ(t.class_sizes, (std::vector<Index>{2, 3}));
}

TEST(StratifiedSplit, AtLeastOneTrainingPixel) {
  const auto s = lslrr::stratified_split(labelled({3, 3}), 0.01, 4);
  EXPECT_EQ(s.class_sizes, (std::vector<Index>{1, 1}));
}

TEST(StratifiedSplit, DeterministicForSeed) {
  const auto ds = labelled({7, 9, 5});
  const auto a = lslrr::stratified_split(ds, 0.3, 17), b = lslrr::stratified_split(ds, 0.3, 17);
  EXPECT_EQ(a.train_indices, b.train_indices);
  EXPECT_EQ(a.test_indices, b.test_indices);
  const auto c = lslrr::stratified_split(ds, 0.3, 18);
  EXPECT_NE(a.ordered_all(), c.ordered_all());
}

TEST(StratifiedSplit, PartitionAndClassOrder) {
  auto ds = labelled({8, 5, 12});
  ds.labels[3] = 0;  // unlabeled pixels never enter a split
  const auto s = lslrr::stratified_split(ds, 0.25, 3);
  const auto all = s.ordered_all();
  std::set<Index> seen(all.begin(), all.end());
  EXPECT_EQ(seen.size(), all.size());
  EXPECT_EQ(static_cast<Index>(all.size()), 24);
  EXPECT_EQ(seen.count(3), 0u);
  const auto train = s.ordered_train();
  for (std::size_t p = 1; p < train.size(); ++p) {
    EXPECT_LE(ds.labels[static_cast<std::size_t>(train[p - 1])], ds.labels[static_cast<std::size_t>(train[p])]);
  }
}

TEST(StratifiedSplit, TinyClassIsAnError) {
  try {
    lslrr::stratified_split(labelled({5, 1, 4}), 0.5, 0);
    FAIL() << "expected SplitError";
  } catch (const lslrr::SplitError& e) {
    EXPECT_EQ(e.class_id(), 2);
  }
}

TEST(StratifiedSplit, RequiresLabels) {
  EXPECT_THROW(lslrr::stratified_split(lslrr::make_dataset(Matrix::Zero(1, 4), Matrix::Zero(2, 4)), 0.5, 0),
               lslrr::Error);
}
