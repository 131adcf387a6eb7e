#pragma once

#include <vector>

#include "lslrr/data_model.hpp"
#include "lslrr/metrics.hpp"
#include "lslrr/solver.hpp"
#include "lslrr/structure.hpp"

namespace lslrr {

// Solver input assembled from a normalized dataset and a split: training
// pixels (class-ordered) form the dictionary, every selected pixel forms the
// data. Q is only built when beta > 0.
struct PreparedProblem {
  ProblemInstance instance;
  std::vector<Index> sample_order;  // dataset column of each data column
  KernelParams kernel;
};

PreparedProblem prepare_problem(const PixelDataset& normalized, const Split& split,
                                const SolverConfig& cfg);

struct Classification {
  SolverSolution solution;
  KernelParams kernel;
  std::vector<int> predicted;  // one per split.test_indices
  std::vector<int> truth;
  EvalReport report;
};

// normalize -> prepare_problem -> solve_lslrr -> assign_labels -> evaluate.
Classification classify_dataset(const PixelDataset& ds, const Split& split,
                                const SolverConfig& cfg, const IterationObserver& observer = {});

// Full-grid label image (row-major, rows x cols) from integer pixel
// coordinates: training pixels keep their labels, test pixels get the
// prediction, everything else stays 0.
std::vector<int> label_image(const Matrix& raw_coords, const std::vector<int>& labels, Index rows,
                             Index cols);

}  // namespace lslrr
