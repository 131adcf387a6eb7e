#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "lslrr/data_model.hpp"

namespace lslrr {

// Hyperparameters of the model and the inexact ALM schedule. sigma and theta
// left unset are resolved from the data when Q is built.
struct SolverConfig {
  double lambda = 10.0;
  double alpha = 0.8;
  double beta = 0.6;
  double m_param = 25.0;
  std::optional<double> sigma;
  std::optional<double> theta;
  double w = 0.5;
  double mu0 = 1e-6;
  double rho = 1.1;
  double mu_max = 1e10;
  double epsilon = 1e-4;
  int max_iter = 500;
  bool dictionary_learning = true;
  bool column_sum_constraint = true;

  // Throws ConfigError on any out-of-range field.
  void validate() const;
};

// Everything the solver consumes. Columns of X are ordered dictionary pixels
// first (class-ordered), then test pixels; D0 is the leading block of X for
// the full model. Q may be empty when beta == 0.
struct ProblemInstance {
  Matrix X;
  Matrix D0;
  Matrix M;
  Matrix Q;
  std::vector<Index> class_sizes;

  Index atom_count() const { return D0.cols(); }
  Index sample_count() const { return X.cols(); }
  Index test_count() const { return X.cols() - D0.cols(); }

  void validate(const SolverConfig& cfg) const;
};

// Sup-norms checked for convergence after every iteration.
struct Residuals {
  double reconstruction = 0.0;     // ||X - DZ - E||
  double z_minus_j = 0.0;          // ||Z - J||
  double h_minus_z = 0.0;          // ||H - Z||
  double dictionary_change = 0.0;  // ||D_new - D_old||
  double column_sum = 0.0;         // ||1'Z - 1'||

  double max() const;
  bool below(double eps) const { return max() < eps; }
};

struct IterationRecord {
  int iteration = 0;
  double mu = 0.0;
  Residuals residuals;
};

struct SolverState {
  Matrix H, J, Z, E, D;
  Matrix Y1, Y2, Y3;
  RowVector Y4;
  double mu = 0.0;
  int iteration = 0;
  std::vector<IterationRecord> history;
};

struct SolverSolution {
  Matrix Z;           // final H: non-negative representation, atoms x samples
  Matrix Z_iterate;   // final unconstrained Z iterate
  Matrix E;
  Matrix D;
  bool converged = false;
  int iterations_used = 0;
  Residuals final_residuals;
  std::vector<IterationRecord> history;

  Matrix z_train() const { return Z.leftCols(D.cols()); }
  Matrix z_test() const { return Z.rightCols(Z.cols() - D.cols()); }
};

SolverState initial_state(const ProblemInstance& inst, const SolverConfig& cfg);

// Individual block updates. Each reads the current iterates from `s` and
// returns the new value of one block without modifying `s`.
Matrix update_H(const SolverState& s, const Matrix& locality, const SolverConfig& cfg);
Matrix update_J(const SolverState& s);
Matrix update_Z(const SolverState& s, const ProblemInstance& inst, const SolverConfig& cfg);
Matrix update_E(const SolverState& s, const ProblemInstance& inst, const SolverConfig& cfg);
Matrix update_D(const SolverState& s, const ProblemInstance& inst, const SolverConfig& cfg);

// One full sweep: block updates, multipliers, residuals, penalty. Returns the
// residuals recorded for this iteration.
Residuals iterate_once(SolverState& s, const ProblemInstance& inst, const SolverConfig& cfg);

using IterationObserver = std::function<void(const IterationRecord&)>;

// Full model: nuclear norm + l2,1 noise + locality + structure penalties,
// column-sum and non-negativity constraints, optional dictionary learning.
// Throws DivergenceError when an iterate stops being finite.
SolverSolution solve_lslrr(const ProblemInstance& inst, const SolverConfig& cfg,
                           const IterationObserver& observer = {});

// Locality-regularized variant: same loop with the structure term, the
// column-sum constraint and dictionary learning switched off. Returns the
// non-negative representation of `data` over the fixed `dict`.
Matrix solve_llrr(const Matrix& data, const Matrix& dict, const Matrix& locality,
                  const SolverConfig& cfg);

}  // namespace lslrr
