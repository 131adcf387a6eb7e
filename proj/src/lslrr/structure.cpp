#include "lslrr/structure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lslrr/error.hpp"

namespace lslrr {

namespace {

void check_view(const PixelView& v, const char* name) {
  if (v.coords.rows() != 2 || v.coords.cols() != v.spectra.cols()) {
    throw InvalidInputError(std::string(name) + ": coords must be 2 x pixel_count");
  }
}

void check_pair(const PixelView& a, const PixelView& b) {
  check_view(a, "train");
  check_view(b, "other");
  if (a.spectra.rows() != b.spectra.rows()) {
    throw InvalidInputError("band count mismatch: " + std::to_string(a.spectra.rows()) + " vs " +
                            std::to_string(b.spectra.rows()));
  }
}

}  // namespace

Matrix squared_combined_distances(const PixelView& rows, const PixelView& cols, double m_param) {
  check_pair(rows, cols);
  Matrix out(rows.size(), cols.size());
  for (Index j = 0; j < cols.size(); ++j) {
    for (Index i = 0; i < rows.size(); ++i) {
      const double spectral = (rows.spectra.col(i) - cols.spectra.col(j)).squaredNorm();
      const double spatial = (rows.coords.col(i) - cols.coords.col(j)).squaredNorm();
      out(i, j) = spectral + m_param * spatial;
    }
  }
  return out;
}

LocalityMatrix build_locality_matrix(const PixelView& train, const PixelView& all,
                                     double m_param) {
  if (m_param < 0.0) throw ConfigError("m must be >= 0");
  return {squared_combined_distances(train, all, m_param).cwiseSqrt(), m_param};
}

Matrix build_q_test(const PixelView& train, const PixelView& test, double m_param, double sigma,
                    double theta) {
  if (!(sigma > 0.0)) throw ConfigError("sigma must be > 0");
  if (!(theta > 0.0)) throw ConfigError("theta must be > 0");
  Matrix q = squared_combined_distances(train, test, m_param);
  for (Index k = 0; k < q.size(); ++k) {
    double& v = q.data()[k];
    v = (v <= theta) ? std::exp(-v / sigma) : 0.0;
  }
  return q;
}

KernelParams default_kernel_params(const PixelView& train, const PixelView& test,
                                   double m_param) {
  KernelParams p;
  if (train.size() == 0 || test.size() == 0) return p;
  const Matrix d2 = squared_combined_distances(train, test, m_param);
  std::vector<double> all(d2.data(), d2.data() + d2.size());
  std::sort(all.begin(), all.end());
  const auto rank = static_cast<std::size_t>(std::ceil(0.2 * static_cast<double>(all.size())));
  p.theta = all[std::max<std::size_t>(rank, 1) - 1];

  double sum = 0.0;
  std::size_t count = 0;
  for (double v : all) {
    if (v > p.theta) break;
    if (v > 0.0) {
      sum += v;
      ++count;
    }
  }
  if (count > 0) p.sigma = sum / static_cast<double>(count);
  // Degenerate data (all distances zero): any positive width works.
  if (!(p.theta > 0.0)) p.theta = 1.0;
  return p;
}

KernelParams resolve_kernel_params(const PixelView& train, const PixelView& test,
                                   const SolverConfig& cfg) {
  KernelParams p;
  if (!cfg.sigma || !cfg.theta) p = default_kernel_params(train, test, cfg.m_param);
  if (cfg.sigma) p.sigma = *cfg.sigma;
  if (cfg.theta) p.theta = *cfg.theta;
  return p;
}

Matrix build_q_train(const PixelView& train, const std::vector<Index>& class_sizes,
                     const SolverConfig& cfg) {
  check_view(train, "train");
  Index total = 0;
  for (Index s : class_sizes) total += s;
  if (total != train.size()) throw InvalidInputError("class sizes do not sum to training count");

  SolverConfig inner = cfg;
  inner.epsilon = 10.0 * cfg.epsilon;
  inner.max_iter = cfg.max_iter / 2;

  Matrix q = Matrix::Zero(total, total);
  Index offset = 0;
  for (std::size_t l = 0; l < class_sizes.size(); ++l) {
    const Index size = class_sizes[l];
    if (size == 0) continue;
    const PixelView block{train.spectra.middleCols(offset, size),
                          train.coords.middleCols(offset, size)};
    const Matrix locality = build_locality_matrix(block, block, cfg.m_param).values;
    try {
      q.block(offset, offset, size, size) =
          solve_llrr(block.spectra, block.spectra, locality, inner);
    } catch (const DivergenceError& e) {
      throw DivergenceError(e.iteration(), "class " + std::to_string(l + 1) + ": " + e.what());
    }
    offset += size;
  }
  return q;
}

StructureMatrix build_structure_matrix(const PixelView& train, const PixelView& test,
                                       const std::vector<Index>& class_sizes,
                                       const SolverConfig& cfg) {
  const KernelParams kp = resolve_kernel_params(train, test, cfg);
  StructureMatrix s;
  s.train_count = train.size();
  s.sigma = kp.sigma;
  s.theta = kp.theta;
  s.values.resize(train.size(), train.size() + test.size());
  s.values.leftCols(train.size()) = build_q_train(train, class_sizes, cfg);
  if (test.size() > 0) {
    s.values.rightCols(test.size()) = build_q_test(train, test, cfg.m_param, kp.sigma, kp.theta);
  }
  return s;
}

}  // namespace lslrr
