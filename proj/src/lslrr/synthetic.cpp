#include "lslrr/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "lslrr/error.hpp"

namespace lslrr {

namespace {

enum Stream : std::uint64_t { kFrame = 1, kCoefficients = 2, kNoise = 3, kCorruption = 4 };

std::mt19937_64 stream(std::uint64_t seed, Stream id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(id)};
  return std::mt19937_64(seq);
}

}  // namespace

int SyntheticSpec::resolved_grid_side() const {
  if (grid_side > 0) return grid_side;
  const long total = static_cast<long>(classes) * pixels_per_class;
  int side = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(total))));
  while (static_cast<long>(side) * side < total) ++side;
  return side;
}

void SyntheticSpec::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("synthetic spec: " + what); };
  if (band_count < 1) fail("band_count must be >= 1");
  if (classes < 1) fail("classes must be >= 1");
  if (subspace_dim < 1) fail("subspace_dim must be >= 1");
  if (pixels_per_class < 1) fail("pixels_per_class must be >= 1");
  if (subspace_dim >= band_count) fail("subspace_dim must be < band_count");
  if (static_cast<long>(classes) * subspace_dim > band_count) {
    fail("classes * subspace_dim must not exceed band_count");
  }
  const long side = resolved_grid_side();
  if (static_cast<long>(classes) * pixels_per_class > side * side) {
    fail("grid of side " + std::to_string(side) + " cannot hold every pixel");
  }
  if (!(noise_sigma >= 0.0)) fail("noise_sigma must be >= 0");
  if (!(corrupt_fraction >= 0.0 && corrupt_fraction <= 1.0)) {
    fail("corrupt_fraction must lie in [0,1]");
  }
}

SyntheticData generate_raw(const SyntheticSpec& spec) {
  spec.validate();
  const Index d = spec.band_count, c = spec.classes, r = spec.subspace_dim;
  const Index per = spec.pixels_per_class, n = c * per;
  const int side = spec.resolved_grid_side();

  std::normal_distribution<double> gauss(0.0, 1.0);

  auto frame_rng = stream(spec.seed, kFrame);
  Matrix g(d, c * r);
  for (Index k = 0; k < g.size(); ++k) g.data()[k] = gauss(frame_rng);
  const Matrix frame = Eigen::HouseholderQR<Matrix>(g).householderQ() * Matrix::Identity(d, c * r);

  SyntheticData out;
  Matrix spectra(d, n);
  Matrix coords(2, n);
  std::vector<int> labels(static_cast<std::size_t>(n));

  auto coeff_rng = stream(spec.seed, kCoefficients);
  for (Index l = 0; l < c; ++l) {
    out.bases.push_back(frame.middleCols(l * r, r));
    Matrix coeffs(r, per);
    for (Index k = 0; k < coeffs.size(); ++k) coeffs.data()[k] = gauss(coeff_rng);
    spectra.middleCols(l * per, per) = out.bases.back() * coeffs;
    for (Index k = 0; k < per; ++k) {
      const Index p = l * per + k;
      coords(0, p) = static_cast<double>(p / side);
      coords(1, p) = static_cast<double>(p % side);
      labels[static_cast<std::size_t>(p)] = static_cast<int>(l) + 1;
    }
  }

  if (spec.noise_sigma > 0.0) {
    auto noise_rng = stream(spec.seed, kNoise);
    for (Index k = 0; k < spectra.size(); ++k) {
      spectra.data()[k] += spec.noise_sigma * gauss(noise_rng);
    }
  }

  const auto n_corrupt =
      static_cast<Index>(std::llround(spec.corrupt_fraction * static_cast<double>(n)));
  if (n_corrupt > 0) {
    auto corrupt_rng = stream(spec.seed, kCorruption);
    std::vector<Index> cols(static_cast<std::size_t>(n));
    std::iota(cols.begin(), cols.end(), Index{0});
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (Index k = 0; k < n_corrupt; ++k) {
      std::uniform_int_distribution<Index> pick(k, n - 1);
      std::swap(cols[static_cast<std::size_t>(k)], cols[static_cast<std::size_t>(pick(corrupt_rng))]);
    }
    out.corrupted.assign(cols.begin(), cols.begin() + n_corrupt);
    std::sort(out.corrupted.begin(), out.corrupted.end());
    for (Index col : out.corrupted) {
      for (Index b = 0; b < d; ++b) spectra(b, col) = unit(corrupt_rng);
    }
  }

  out.dataset = make_dataset(std::move(spectra), std::move(coords), std::move(labels));
  return out;
}

PixelDataset generate(const SyntheticSpec& spec) { return normalize(generate_raw(spec).dataset); }

}  // namespace lslrr
