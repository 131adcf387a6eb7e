#include "lslrr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lslrr/error.hpp"

namespace lslrr {

std::vector<int> assign_labels(const Matrix& z_test, const std::vector<Index>& class_sizes) {
  Index total = 0;
  for (Index s : class_sizes) {
    if (s < 0) throw InvalidInputError("negative class size");
    total += s;
  }
  if (total != z_test.rows()) {
    throw InvalidInputError("class sizes sum to " + std::to_string(total) +
                            " but representation has " + std::to_string(z_test.rows()) + " rows");
  }
  if (class_sizes.empty()) throw InvalidInputError("no classes");

  std::vector<int> labels(static_cast<std::size_t>(z_test.cols()), 1);
  for (Index j = 0; j < z_test.cols(); ++j) {
    double best = -std::numeric_limits<double>::infinity();
    Index offset = 0;
    for (std::size_t l = 0; l < class_sizes.size(); ++l) {
      const double score = z_test.col(j).segment(offset, class_sizes[l]).sum();
      if (score > best) {
        best = score;
        labels[static_cast<std::size_t>(j)] = static_cast<int>(l) + 1;
      }
      offset += class_sizes[l];
    }
  }
  return labels;
}

EvalReport report_from_confusion(const Eigen::MatrixXi& confusion) {
  const Index c = confusion.rows();
  if (confusion.cols() != c) throw InvalidInputError("confusion matrix must be square");

  EvalReport r;
  r.confusion = confusion;
  r.per_class_accuracy.assign(static_cast<std::size_t>(c), std::numeric_limits<double>::quiet_NaN());
  const double total = confusion.cast<double>().sum();
  if (total <= 0.0) return r;

  double correct = 0.0, chance = 0.0, recall_sum = 0.0;
  int present = 0;
  for (Index l = 0; l < c; ++l) {
    const double row = confusion.row(l).cast<double>().sum();
    const double col = confusion.col(l).cast<double>().sum();
    correct += confusion(l, l);
    chance += row * col;
    if (row > 0.0) {
      const double recall = confusion(l, l) / row;
      r.per_class_accuracy[static_cast<std::size_t>(l)] = recall;
      recall_sum += recall;
      ++present;
    }
  }
  r.overall_accuracy = correct / total;
  r.average_accuracy = present ? recall_sum / present : 0.0;
  const double pe = chance / (total * total);
  // Both raters constant and in full agreement: define kappa as 1.
  r.kappa = (pe < 1.0) ? (r.overall_accuracy - pe) / (1.0 - pe) : 1.0;
  return r;
}

EvalReport evaluate(const std::vector<int>& predicted, const std::vector<int>& truth,
                    int class_count) {
  if (predicted.size() != truth.size()) {
    throw InvalidInputError("predicted has " + std::to_string(predicted.size()) +
                            " labels but truth has " + std::to_string(truth.size()));
  }
  int c = class_count;
  if (c <= 0) {
    for (int v : predicted) c = std::max(c, v);
    for (int v : truth) c = std::max(c, v);
  }
  Eigen::MatrixXi confusion = Eigen::MatrixXi::Zero(c, c);
  for (std::size_t k = 0; k < truth.size(); ++k) {
    const int t = truth[k], p = predicted[k];
    if (t == 0) continue;
    if (t < 0 || t > c) throw InvalidInputError("truth label " + std::to_string(t) + " out of range");
    if (p < 1 || p > c) throw InvalidInputError("predicted label " + std::to_string(p) + " out of range");
    ++confusion(t - 1, p - 1);
  }
  return report_from_confusion(confusion);
}

}  // namespace lslrr
