#include "lslrr/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lslrr/error.hpp"
#include "lslrr/proximal.hpp"

namespace lslrr {

namespace {

double sup_norm(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }
double sup_norm(const RowVector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

bool use_structure(const ProblemInstance& inst, const SolverConfig& cfg) {
  return cfg.beta > 0.0 && inst.Q.size() > 0;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

void SolverConfig::validate() const {
  require(lambda > 0.0, "lambda must be > 0");
  require(alpha >= 0.0, "alpha must be >= 0");
  require(beta >= 0.0, "beta must be >= 0");
  require(m_param >= 0.0, "m must be >= 0");
  require(!sigma || *sigma > 0.0, "sigma must be > 0");
  require(!theta || *theta > 0.0, "theta must be > 0");
  require(w >= 0.0 && w <= 1.0, "w must lie in [0,1]");
  require(mu0 > 0.0, "mu0 must be > 0");
  require(rho > 1.0, "rho must be > 1");
  require(mu_max > mu0, "mu_max must exceed mu0");
  require(epsilon > 0.0, "epsilon must be > 0");
  require(max_iter >= 0, "max_iter must be >= 0");
  require(std::isfinite(lambda) && std::isfinite(alpha) && std::isfinite(beta) &&
              std::isfinite(m_param) && std::isfinite(mu0) && std::isfinite(mu_max),
          "config values must be finite");
}

void ProblemInstance::validate(const SolverConfig& cfg) const {
  const Index d = X.rows(), n = X.cols(), m = D0.cols();
  if (D0.rows() != d) throw InvalidInputError("dictionary and data band counts differ");
  if (m == 0 || n < m) throw InvalidInputError("need at least one atom and n >= m samples");
  if (M.rows() != m || M.cols() != n) throw InvalidInputError("locality matrix must be m x n");
  if (cfg.beta > 0.0 && (Q.rows() != m || Q.cols() != n)) {
    throw InvalidInputError("structure matrix must be m x n when beta > 0");
  }
  if (!class_sizes.empty()) {
    Index total = 0;
    for (Index s : class_sizes) total += s;
    if (total != m) throw InvalidInputError("class sizes do not sum to the atom count");
  }
}

double Residuals::max() const {
  return std::max({reconstruction, z_minus_j, h_minus_z, dictionary_change, column_sum});
}

SolverState initial_state(const ProblemInstance& inst, const SolverConfig& cfg) {
  const Index d = inst.X.rows(), n = inst.X.cols(), m = inst.atom_count();
  SolverState s;
  s.H = Matrix::Zero(m, n);
  s.J = Matrix::Zero(m, n);
  s.Z = Matrix::Zero(m, n);
  s.E = Matrix::Zero(d, n);
  s.D = inst.D0;
  s.Y1 = Matrix::Zero(d, n);
  s.Y2 = Matrix::Zero(m, n);
  s.Y3 = Matrix::Zero(m, n);
  s.Y4 = RowVector::Zero(n);
  s.mu = cfg.mu0;
  return s;
}

Matrix update_H(const SolverState& s, const Matrix& locality, const SolverConfig& cfg) {
  const Matrix v = s.Z - s.Y3 / s.mu;
  if (cfg.alpha == 0.0) return v.cwiseMax(0.0);
  return weighted_nonneg_shrink(v, (cfg.alpha / s.mu) * locality);
}

Matrix update_J(const SolverState& s) { return svt(s.Z + s.Y2 / s.mu, 1.0 / s.mu); }

Matrix update_Z(const SolverState& s, const ProblemInstance& inst, const SolverConfig& cfg) {
  const Matrix a = inst.X - s.E + s.Y1 / s.mu;

  Matrix lhs = s.D.transpose() * s.D;
  lhs.diagonal().array() += 2.0;
  Matrix rhs = s.D.transpose() * a + (s.J - s.Y2 / s.mu) + (s.H + s.Y3 / s.mu);
  if (cfg.column_sum_constraint) {
    lhs.array() += 1.0;
    const RowVector f = RowVector::Ones(s.Z.cols()) - s.Y4 / s.mu;
    rhs.rowwise() += f;
  }
  lhs *= s.mu;
  rhs *= s.mu;
  if (use_structure(inst, cfg)) {
    lhs.diagonal().array() += 2.0 * cfg.beta;
    rhs += 2.0 * cfg.beta * inst.Q;
  }

  Eigen::LLT<Matrix> llt(lhs);
  if (llt.info() != Eigen::Success) {
    // lhs is SPD for mu > 0; reaching this means mu or D overflowed.
    throw DivergenceError(s.iteration, "Z normal matrix lost positive definiteness");
  }
  return llt.solve(rhs);
}

Matrix update_E(const SolverState& s, const ProblemInstance& inst, const SolverConfig& cfg) {
  const Matrix g = inst.X - s.D * s.Z + s.Y1 / s.mu;
  return l21_shrink(g, cfg.lambda / s.mu);
}

Matrix update_D(const SolverState& s, const ProblemInstance& inst, const SolverConfig& cfg) {
  if (!cfg.dictionary_learning) return s.D;
  const Index m = s.Z.rows();
  Matrix gram = s.Z * s.Z.transpose();
  const double trace = gram.trace();
  if (!(trace > 0.0)) return s.D;
  gram.diagonal().array() += 1e-8 * trace / static_cast<double>(m);

  const Matrix a = inst.X - s.E + s.Y1 / s.mu;
  // D_new = (A Z' + delta D) (ZZ' + delta I)^-1, solved from the transposed
  // system. The delta D term keeps directions Z does not excite at their
  // current value instead of shrinking them to zero.
  const double delta = 1e-8 * trace / static_cast<double>(m);
  const Matrix d_new =
      gram.llt().solve(s.Z * a.transpose() + delta * s.D.transpose()).transpose();
  return cfg.w * s.D + (1.0 - cfg.w) * d_new;
}

Residuals iterate_once(SolverState& s, const ProblemInstance& inst, const SolverConfig& cfg) {
  s.H = update_H(s, inst.M, cfg);
  s.J = update_J(s);
  s.Z = update_Z(s, inst, cfg);
  s.E = update_E(s, inst, cfg);
  Matrix d_new = update_D(s, inst, cfg);

  Residuals r;
  r.dictionary_change = sup_norm(Matrix(d_new - s.D));
  s.D = std::move(d_new);

  const Matrix recon = inst.X - s.D * s.Z - s.E;
  const Matrix z_j = s.Z - s.J;
  const Matrix h_z = s.H - s.Z;
  r.reconstruction = sup_norm(recon);
  r.z_minus_j = sup_norm(z_j);
  r.h_minus_z = sup_norm(h_z);

  s.Y1 += s.mu * recon;
  s.Y2 += s.mu * z_j;
  s.Y3 += s.mu * h_z;
  if (cfg.column_sum_constraint) {
    const RowVector colsum = s.Z.colwise().sum() - RowVector::Ones(s.Z.cols());
    r.column_sum = sup_norm(colsum);
    s.Y4 += s.mu * colsum;
  }

  s.history.push_back({s.iteration, s.mu, r});
  s.mu = std::min(cfg.rho * s.mu, cfg.mu_max);
  ++s.iteration;
  return r;
}

namespace {

void check_finite(const SolverState& s, double x_norm) {
  auto finite = [](const auto& m) { return m.allFinite(); };
  if (!(finite(s.H) && finite(s.J) && finite(s.Z) && finite(s.E) && finite(s.D) &&
        finite(s.Y1) && finite(s.Y2) && finite(s.Y3) && finite(s.Y4))) {
    throw DivergenceError(s.iteration, "non-finite iterate");
  }
  if (x_norm > 0.0 && s.Z.norm() > 1e8 * x_norm) {
    throw DivergenceError(s.iteration, "representation norm exceeded 1e8 * ||X||_F");
  }
}

}  // namespace

SolverSolution solve_lslrr(const ProblemInstance& inst, const SolverConfig& cfg,
                           const IterationObserver& observer) {
  cfg.validate();
  inst.validate(cfg);
  if (!inst.X.allFinite()) throw InvalidInputError("data contains non-finite values");

  const double x_norm = inst.X.norm();
  SolverState s = initial_state(inst, cfg);
  bool converged = false;
  Residuals last;
  while (s.iteration < cfg.max_iter) {
    last = iterate_once(s, inst, cfg);
    check_finite(s, x_norm);
    if (observer) observer(s.history.back());
    if (last.below(cfg.epsilon)) {
      converged = true;
      break;
    }
  }

  SolverSolution out;
  out.Z = std::move(s.H);
  out.Z_iterate = std::move(s.Z);
  out.E = std::move(s.E);
  out.D = std::move(s.D);
  out.converged = converged;
  out.iterations_used = s.iteration;
  out.final_residuals = last;
  out.history = std::move(s.history);
  return out;
}

Matrix solve_llrr(const Matrix& data, const Matrix& dict, const Matrix& locality,
                  const SolverConfig& cfg) {
  SolverConfig reduced = cfg;
  reduced.beta = 0.0;
  reduced.dictionary_learning = false;
  reduced.column_sum_constraint = false;

  ProblemInstance inst;
  inst.X = data;
  inst.D0 = dict;
  inst.M = locality;
  return solve_lslrr(inst, reduced).Z;
}

}  // namespace lslrr
