#pragma once

#include <vector>

#include "lslrr/data_model.hpp"

namespace lslrr {

// For each test column, sums the representation over each class's row block
// and picks the class with the largest sum (smallest class id on ties).
std::vector<int> assign_labels(const Matrix& z_test, const std::vector<Index>& class_sizes);

struct EvalReport {
  Eigen::MatrixXi confusion;  // rows = true class, cols = predicted class
  std::vector<double> per_class_accuracy;  // NaN for classes absent from truth
  double overall_accuracy = 0.0;
  double average_accuracy = 0.0;
  double kappa = 0.0;
};

// Pixels with truth label 0 are skipped. class_count <= 0 means "largest
// label seen in either vector".
EvalReport evaluate(const std::vector<int>& predicted, const std::vector<int>& truth,
                    int class_count = 0);

// OA / AA / kappa straight from a confusion matrix.
EvalReport report_from_confusion(const Eigen::MatrixXi& confusion);

}  // namespace lslrr
