#include "lslrr/data_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "lslrr/error.hpp"

namespace lslrr {

void PixelDataset::validate() const {
  if (spectra.cols() != coords.cols()) {
    throw InvalidInputError("spectra has " + std::to_string(spectra.cols()) +
                            " pixels but coords has " + std::to_string(coords.cols()));
  }
  if (coords.rows() != 2) {
    throw InvalidInputError("coords must have 2 rows, got " + std::to_string(coords.rows()));
  }
  if (!labels.empty() && static_cast<Index>(labels.size()) != spectra.cols()) {
    throw InvalidInputError("labels has " + std::to_string(labels.size()) +
                            " entries but dataset has " + std::to_string(spectra.cols()) +
                            " pixels");
  }
  for (int l : labels) {
    if (l < 0 || l > class_count) {
      throw InvalidInputError("label " + std::to_string(l) + " outside 0.." +
                              std::to_string(class_count));
    }
  }
}

PixelDataset make_dataset(Matrix spectra, Matrix coords, std::vector<int> labels) {
  PixelDataset ds;
  ds.spectra = std::move(spectra);
  ds.coords = std::move(coords);
  ds.labels = std::move(labels);
  ds.class_count = ds.labels.empty() ? 0 : *std::max_element(ds.labels.begin(), ds.labels.end());
  ds.validate();
  return ds;
}

Index Split::train_count() const {
  return std::accumulate(class_sizes.begin(), class_sizes.end(), Index{0});
}

std::vector<Index> Split::ordered_train() const {
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(train_count()));
  for (const auto& cls : train_indices) out.insert(out.end(), cls.begin(), cls.end());
  return out;
}

std::vector<Index> Split::ordered_all() const {
  auto out = ordered_train();
  out.insert(out.end(), test_indices.begin(), test_indices.end());
  return out;
}

namespace {

void scale_rows(Matrix& m) {
  for (Index r = 0; r < m.rows(); ++r) {
    const double lo = m.row(r).minCoeff();
    const double hi = m.row(r).maxCoeff();
    const double range = hi - lo;
    if (!(range > 0.0)) {
      m.row(r).setZero();
      continue;
    }
    for (Index c = 0; c < m.cols(); ++c) {
      m(r, c) = std::clamp((m(r, c) - lo) / range, 0.0, 1.0);
    }
  }
}

}  // namespace

PixelDataset normalize(const PixelDataset& ds) {
  if (ds.spectra.size() == 0 || ds.pixel_count() < 2) {
    throw InvalidInputError("normalize needs at least one band and two pixels");
  }
  ds.validate();
  PixelDataset out = ds;
  scale_rows(out.spectra);
  scale_rows(out.coords);
  return out;
}

Split stratified_split(const PixelDataset& ds, double train_fraction, std::uint64_t seed) {
  if (!ds.has_labels()) throw InvalidInputError("stratified_split needs labels");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw InvalidInputError("train fraction must lie in (0,1)");
  }
  ds.validate();

  const int c = ds.class_count;
  std::vector<std::vector<Index>> by_class(static_cast<std::size_t>(c));
  for (Index i = 0; i < ds.pixel_count(); ++i) {
    const int l = ds.labels[static_cast<std::size_t>(i)];
    if (l > 0) by_class[static_cast<std::size_t>(l - 1)].push_back(i);
  }

  Split split;
  split.train_indices.resize(static_cast<std::size_t>(c));
  split.class_sizes.resize(static_cast<std::size_t>(c));
  std::mt19937_64 rng(seed);
  for (int l = 0; l < c; ++l) {
    auto& pool = by_class[static_cast<std::size_t>(l)];
    if (pool.size() < 2) {
      throw SplitError(l + 1, "class " + std::to_string(l + 1) + " has " +
                                  std::to_string(pool.size()) +
                                  " labeled pixels, need at least 2");
    }
    const auto want = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(pool.size()))));
    // Partial Fisher-Yates: the first `want` slots become the training draw.
    for (std::size_t k = 0; k < want; ++k) {
      std::uniform_int_distribution<std::size_t> pick(k, pool.size() - 1);
      std::swap(pool[k], pool[pick(rng)]);
    }
    auto& train = split.train_indices[static_cast<std::size_t>(l)];
    train.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(want));
    std::sort(train.begin(), train.end());
    split.test_indices.insert(split.test_indices.end(),
                              pool.begin() + static_cast<std::ptrdiff_t>(want), pool.end());
    split.class_sizes[static_cast<std::size_t>(l)] = static_cast<Index>(want);
  }
  std::sort(split.test_indices.begin(), split.test_indices.end());
  return split;
}

Matrix select_columns(const Matrix& m, const std::vector<Index>& cols) {
  Matrix out(m.rows(), static_cast<Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) out.col(static_cast<Index>(k)) = m.col(cols[k]);
  return out;
}

}  // namespace lslrr
