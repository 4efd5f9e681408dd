// Copyright 2026 The graphmc Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "graphmc/solvers.h"

#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

#include "graphmc/errors.h"

namespace graphmc {

std::string to_string(SolverMethod method) {
  switch (method) {
    case SolverMethod::kAuto:
      return "auto";
    case SolverMethod::kDenseDirect:
      return "dense";
    case SolverMethod::kConjugateGradient:
      return "cg";
  }
  return "unknown";
}

SolverMethod parse_solver_method(const std::string& name) {
  if (name == "auto") return SolverMethod::kAuto;
  if (name == "dense" || name == "dense_direct") {
    return SolverMethod::kDenseDirect;
  }
  if (name == "cg" || name == "conjugate_gradient") {
    return SolverMethod::kConjugateGradient;
  }
  throw ValidationError("unknown solver method '" + name + "'");
}

void SolverConfig::validate() const {
  if (!(cg_rel_tolerance > 0.0 && cg_rel_tolerance < 1.0)) {
    throw ValidationError("cg_rel_tolerance must lie in (0, 1)");
  }
  if (cg_max_iters < 0) throw ValidationError("cg_max_iters must be >= 1");
  if (dense_threshold < 0) {
    throw ValidationError("dense_threshold must be non-negative");
  }
}

SubspaceSystemOperator::SubspaceSystemOperator(
    std::span<const Eigen::MatrixXd> row_accumulators,
    const Eigen::MatrixXd& coefficient_gram, const GraphLaplacian& laplacian,
    double lambda1, double lambda2)
    : row_accumulators_(row_accumulators),
      gram_(coefficient_gram),
      laplacian_(laplacian),
      lambda1_(lambda1),
      lambda2_(lambda2) {
  const auto m = static_cast<Eigen::Index>(row_accumulators_.size());
  if (m != laplacian_.size()) {
    throw ValidationError("operator: accumulator count does not match graph");
  }
  if (gram_.rows() != gram_.cols()) {
    throw ValidationError("operator: R must be square");
  }
  for (const auto& block : row_accumulators_) {
    if (block.rows() != gram_.rows() || block.cols() != gram_.cols()) {
      throw ValidationError("operator: row accumulator has wrong shape");
    }
  }
  if (!(lambda1_ > 0.0)) throw ValidationError("lambda1 must be positive");
  if (lambda2_ < 0.0) throw ValidationError("lambda2 must be non-negative");
}

Eigen::MatrixXd SubspaceSystemOperator::apply(const Eigen::MatrixXd& u) const {
  if (u.rows() != rows() || u.cols() != rank()) {
    throw ValidationError("apply_operator: U has shape " +
                          std::to_string(u.rows()) + "x" +
                          std::to_string(u.cols()) + ", expected " +
                          std::to_string(rows()) + "x" +
                          std::to_string(rank()));
  }
  Eigen::MatrixXd v = lambda1_ * u;
  for (int i = 0; i < rows(); ++i) {
    v.row(i).noalias() += u.row(i) * row_accumulators_[static_cast<std::size_t>(i)];
  }
  if (lambda2_ != 0.0) {
    v.noalias() += lambda2_ * (laplacian_.matrix() * u) * gram_;
  }
  return v;
}

Eigen::MatrixXd SubspaceSystemOperator::materialize() const {
  const int m = rows();
  const int r = rank();
  const Eigen::MatrixXd& lap = laplacian_.matrix();
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(m * r, m * r);
  for (int a = 0; a < r; ++a) {
    for (int b = 0; b < r; ++b) {
      auto block = dense.block(a * m, b * m, m, m);
      if (lambda2_ != 0.0) block = (lambda2_ * gram_(a, b)) * lap;
      for (int i = 0; i < m; ++i) {
        block(i, i) += row_accumulators_[static_cast<std::size_t>(i)](a, b);
      }
    }
  }
  dense.diagonal().array() += lambda1_;
  return dense;
}

Eigen::MatrixXd SubspaceSystemOperator::diagonal_block(int row) const {
  Eigen::MatrixXd block = row_accumulators_[static_cast<std::size_t>(row)];
  block.diagonal().array() += lambda1_;
  if (lambda2_ != 0.0) {
    block += (lambda2_ * laplacian_.matrix()(row, row)) * gram_;
  }
  return block;
}

namespace {

double frobenius_inner(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a.array() * b.array()).sum();
}

SubspaceSolution solve_dense(const SubspaceSystemOperator& op,
                             const Eigen::MatrixXd& rhs) {
  const int m = op.rows();
  const int r = op.rank();
  const Eigen::LLT<Eigen::MatrixXd> chol(op.materialize());
  if (chol.info() != Eigen::Success) {
    throw ValidationError("dense subspace system is not positive definite");
  }
  const Eigen::VectorXd vec_rhs =
      Eigen::Map<const Eigen::VectorXd>(rhs.data(), rhs.size());
  const Eigen::VectorXd vec_u = chol.solve(vec_rhs);
  SubspaceSolution out;
  out.u = Eigen::Map<const Eigen::MatrixXd>(vec_u.data(), m, r);
  out.method = SolverMethod::kDenseDirect;
  const double rhs_norm = rhs.norm();
  out.relative_residual =
      rhs_norm == 0.0 ? 0.0 : (rhs - op.apply(out.u)).norm() / rhs_norm;
  return out;
}

// Block-Jacobi preconditioner over rows of U.
class RowBlockPreconditioner {
 public:
  explicit RowBlockPreconditioner(const SubspaceSystemOperator& op) {
    blocks_.reserve(static_cast<std::size_t>(op.rows()));
    for (int i = 0; i < op.rows(); ++i) {
      blocks_.emplace_back(op.diagonal_block(i));
    }
  }

  Eigen::MatrixXd apply(const Eigen::MatrixXd& residual) const {
    Eigen::MatrixXd z(residual.rows(), residual.cols());
    for (Eigen::Index i = 0; i < residual.rows(); ++i) {
      z.row(i) = blocks_[static_cast<std::size_t>(i)]
                     .solve(residual.row(i).transpose())
                     .transpose();
    }
    return z;
  }

 private:
  std::vector<Eigen::LLT<Eigen::MatrixXd>> blocks_;
};

SubspaceSolution solve_cg(const SubspaceSystemOperator& op,
                          const Eigen::MatrixXd& rhs, const SolverConfig& cfg,
                          const Eigen::MatrixXd* warm_start) {
  const int m = op.rows();
  const int r = op.rank();
  const int max_iters = cfg.cg_max_iters > 0 ? cfg.cg_max_iters : 10 * m * r;
  SubspaceSolution out;
  out.method = SolverMethod::kConjugateGradient;
  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) {
    out.u = Eigen::MatrixXd::Zero(m, r);
    return out;
  }
  const double target = cfg.cg_rel_tolerance * rhs_norm;

  Eigen::MatrixXd x = warm_start != nullptr ? *warm_start
                                            : Eigen::MatrixXd::Zero(m, r);
  const RowBlockPreconditioner precond(op);
  Eigen::MatrixXd res = rhs - op.apply(x);
  Eigen::MatrixXd z = precond.apply(res);
  Eigen::MatrixXd p = z;
  double rz = frobenius_inner(res, z);
  int it = 0;
  while (true) {
    if (res.norm() <= target) {
      // The recursive residual can drift from the true one; confirm and
      // restart from the current iterate if it has.
      res = rhs - op.apply(x);
      if (res.norm() <= target) break;
      z = precond.apply(res);
      p = z;
      rz = frobenius_inner(res, z);
    }
    if (it >= max_iters) {
      const double achieved = (rhs - op.apply(x)).norm() / rhs_norm;
      std::ostringstream os;
      os << "conjugate gradient did not converge in " << max_iters
         << " iterations (relative residual " << achieved << ")";
      throw ConvergenceError(os.str(), achieved, it);
    }
    const Eigen::MatrixXd ap = op.apply(p);
    const double alpha = rz / frobenius_inner(p, ap);
    x += alpha * p;
    res -= alpha * ap;
    z = precond.apply(res);
    const double rz_next = frobenius_inner(res, z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
    ++it;
  }
  out.u = std::move(x);
  out.iterations = it;
  out.relative_residual = res.norm() / rhs_norm;
  return out;
}

}  // namespace

SubspaceSolution solve_subspace(const SubspaceSystemOperator& op,
                                const Eigen::MatrixXd& rhs,
                                const SolverConfig& cfg,
                                const Eigen::MatrixXd* warm_start) {
  cfg.validate();
  if (rhs.rows() != op.rows() || rhs.cols() != op.rank()) {
    throw ValidationError("solve_subspace: rhs shape does not match operator");
  }
  if (warm_start != nullptr &&
      (warm_start->rows() != op.rows() || warm_start->cols() != op.rank())) {
    throw ValidationError("solve_subspace: warm start has wrong shape");
  }
  SolverMethod method = cfg.method;
  if (method == SolverMethod::kAuto) {
    method = op.rows() * op.rank() <= cfg.dense_threshold
                 ? SolverMethod::kDenseDirect
                 : SolverMethod::kConjugateGradient;
  }
  if (method == SolverMethod::kDenseDirect) return solve_dense(op, rhs);
  return solve_cg(op, rhs, cfg, warm_start);
}

SylvesterSolver::SylvesterSolver(const GraphLaplacian& laplacian,
                                 double lambda1, double lambda2)
    : basis_(laplacian.eigenvectors()) {
  if (!(lambda1 > 0.0)) throw ValidationError("lambda1 must be positive");
  if (lambda2 < 0.0) throw ValidationError("lambda2 must be non-negative");
  const Eigen::VectorXd& theta = laplacian.eigenvalues();
  inv_k_diag_.resize(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    // I + lambda2 L is positive definite for PSD L.
    const double k = 1.0 + lambda2 * std::max(theta(i), 0.0);
    inv_k_diag_(i) = 1.0 / k;
  }
  left_diag_ = lambda1 * inv_k_diag_;
}

Eigen::MatrixXd SylvesterSolver::solve(const Eigen::MatrixXd& gram,
                                       const Eigen::MatrixXd& rhs) const {
  const Eigen::Index m = basis_.rows();
  const Eigen::Index r = gram.rows();
  if (gram.cols() != r || rhs.rows() != m || rhs.cols() != r) {
    throw ValidationError("solve_sylvester: dimension mismatch");
  }
  const Eigen::RealSchur<Eigen::MatrixXd> schur(gram);
  const Eigen::MatrixXd& t = schur.matrixT();
  const Eigen::MatrixXd& z = schur.matrixU();

  // D Y + Y T = F with D diagonal and T upper quasi-triangular.
  const Eigen::MatrixXd f =
      inv_k_diag_.asDiagonal() * (basis_.transpose() * rhs * z);
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(m, r);
  Eigen::Index j = 0;
  while (j < r) {
    const bool pair = j + 1 < r && t(j + 1, j) != 0.0;
    if (!pair) {
      Eigen::VectorXd col = f.col(j);
      if (j > 0) col.noalias() -= y.leftCols(j) * t.col(j).head(j);
      y.col(j) = col.array() / (left_diag_.array() + t(j, j));
      j += 1;
      continue;
    }
    Eigen::VectorXd c0 = f.col(j);
    Eigen::VectorXd c1 = f.col(j + 1);
    if (j > 0) {
      c0.noalias() -= y.leftCols(j) * t.col(j).head(j);
      c1.noalias() -= y.leftCols(j) * t.col(j + 1).head(j);
    }
    for (Eigen::Index i = 0; i < m; ++i) {
      Eigen::Matrix2d a;
      a << left_diag_(i) + t(j, j), t(j + 1, j), t(j, j + 1),
          left_diag_(i) + t(j + 1, j + 1);
      const Eigen::Vector2d sol = a.partialPivLu().solve(Eigen::Vector2d(c0(i), c1(i)));
      y(i, j) = sol(0);
      y(i, j + 1) = sol(1);
    }
    j += 2;
  }
  return basis_ * y * z.transpose();
}

Eigen::MatrixXd solve_sylvester(const GraphLaplacian& laplacian,
                                double lambda1, double lambda2,
                                const Eigen::MatrixXd& gram,
                                const Eigen::MatrixXd& rhs) {
  return SylvesterSolver(laplacian, lambda1, lambda2).solve(gram, rhs);
}

}  // namespace graphmc
