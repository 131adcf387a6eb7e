#include "lslrr/pipeline.hpp"

#include <cmath>

#include "lslrr/error.hpp"

namespace lslrr {

PreparedProblem prepare_problem(const PixelDataset& normalized, const Split& split,
                                const SolverConfig& cfg) {
  cfg.validate();
  normalized.validate();
  const auto train_cols = split.ordered_train();
  if (train_cols.empty()) throw InvalidInputError("split has no training pixels");

  PreparedProblem p;
  p.sample_order = split.ordered_all();
  for (Index col : p.sample_order) {
    if (col < 0 || col >= normalized.pixel_count()) {
      throw InvalidInputError("split references pixel " + std::to_string(col) +
                              " outside the dataset");
    }
  }
  const Matrix train_spectra = select_columns(normalized.spectra, train_cols);
  const Matrix train_coords = select_columns(normalized.coords, train_cols);
  const Matrix test_spectra = select_columns(normalized.spectra, split.test_indices);
  const Matrix test_coords = select_columns(normalized.coords, split.test_indices);
  const PixelView train{train_spectra, train_coords};
  const PixelView test{test_spectra, test_coords};

  auto& inst = p.instance;
  inst.X.resize(normalized.band_count(), static_cast<Index>(p.sample_order.size()));
  inst.X << train_spectra, test_spectra;
  inst.D0 = train_spectra;
  inst.class_sizes = split.class_sizes;

  Matrix all_coords(2, inst.X.cols());
  all_coords << train_coords, test_coords;
  inst.M = build_locality_matrix(train, PixelView{inst.X, all_coords}, cfg.m_param).values;

  p.kernel = resolve_kernel_params(train, test, cfg);
  if (cfg.beta > 0.0) {
    SolverConfig resolved = cfg;
    resolved.sigma = p.kernel.sigma;
    resolved.theta = p.kernel.theta;
    inst.Q = build_structure_matrix(train, test, split.class_sizes, resolved).values;
  }
  return p;
}

Classification classify_dataset(const PixelDataset& ds, const Split& split,
                                const SolverConfig& cfg, const IterationObserver& observer) {
  if (!ds.has_labels()) throw InvalidInputError("classification needs labels for evaluation");
  const PixelDataset normalized = normalize(ds);
  const PreparedProblem p = prepare_problem(normalized, split, cfg);

  Classification out;
  out.kernel = p.kernel;
  out.solution = solve_lslrr(p.instance, cfg, observer);
  out.predicted = assign_labels(out.solution.z_test(), split.class_sizes);
  out.truth.reserve(split.test_indices.size());
  for (Index col : split.test_indices) out.truth.push_back(ds.labels[static_cast<std::size_t>(col)]);
  out.report = evaluate(out.predicted, out.truth, split.class_count());
  return out;
}

std::vector<int> label_image(const Matrix& raw_coords, const std::vector<int>& labels, Index rows,
                             Index cols) {
  if (raw_coords.rows() != 2 || raw_coords.cols() != static_cast<Index>(labels.size())) {
    throw InvalidInputError("label_image: coords and labels disagree");
  }
  std::vector<int> image(static_cast<std::size_t>(rows * cols), 0);
  for (Index p = 0; p < raw_coords.cols(); ++p) {
    const auto r = static_cast<Index>(std::llround(raw_coords(0, p)));
    const auto c = static_cast<Index>(std::llround(raw_coords(1, p)));
    if (r < 0 || r >= rows || c < 0 || c >= cols) {
      throw InvalidInputError("pixel " + std::to_string(p) + " lies outside the map grid");
    }
    image[static_cast<std::size_t>(r * cols + c)] = labels[static_cast<std::size_t>(p)];
  }
  return image;
}

}  // namespace lslrr
