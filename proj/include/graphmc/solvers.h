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

#ifndef GRAPHMC_SOLVERS_H_
#define GRAPHMC_SOLVERS_H_

#include <span>
#include <string>

#include <Eigen/Dense>

#include "graphmc/graph.h"

namespace graphmc {

enum class SolverMethod { kAuto, kDenseDirect, kConjugateGradient };

std::string to_string(SolverMethod method);
// Accepts "auto", "dense", "dense_direct", "cg", "conjugate_gradient".
SolverMethod parse_solver_method(const std::string& name);

struct SolverConfig {
  SolverMethod method = SolverMethod::kAuto;
  double cg_rel_tolerance = 1e-8;
  // 0 selects the default of 10 * m * r.
  int cg_max_iters = 0;
  // kAuto materializes the mr x mr system when m * r is at most this.
  int dense_threshold = 2000;

  // Throws ValidationError unless tolerance is in (0, 1) and the iteration
  // cap and threshold are non-negative.
  void validate() const;
};

// The linear map behind the subspace update
//
//   U  ->  [row_i(U) M_i]_i  +  lambda1 U  +  lambda2 L U R
//
// where M_i accumulates r_t r_t^T over steps with row i observed. In
// vectorized (column-stacked) form this is
//   sum_t r_t r_t^T (x) Omega_t  +  lambda1 I  +  lambda2 R (x) L,
// but the mr x mr matrix is only built by materialize().
//
// Holds references; the accumulators and Laplacian must outlive it.
class SubspaceSystemOperator {
 public:
  SubspaceSystemOperator(std::span<const Eigen::MatrixXd> row_accumulators,
                         const Eigen::MatrixXd& coefficient_gram,
                         const GraphLaplacian& laplacian, double lambda1,
                         double lambda2);

  int rows() const { return static_cast<int>(row_accumulators_.size()); }
  int rank() const { return static_cast<int>(gram_.rows()); }
  double lambda1() const { return lambda1_; }
  double lambda2() const { return lambda2_; }

  Eigen::MatrixXd apply(const Eigen::MatrixXd& u) const;

  // Dense mr x mr matrix acting on vec(U) (column stacking: entry (i, a) of
  // U sits at index i + a * m).
  Eigen::MatrixXd materialize() const;

  // Diagonal r x r block of the operator for row i:
  //   M_i + lambda1 I + lambda2 L_ii R.
  Eigen::MatrixXd diagonal_block(int row) const;

 private:
  std::span<const Eigen::MatrixXd> row_accumulators_;
  const Eigen::MatrixXd& gram_;
  const GraphLaplacian& laplacian_;
  double lambda1_;
  double lambda2_;
};

inline Eigen::MatrixXd apply_operator(const SubspaceSystemOperator& op,
                                      const Eigen::MatrixXd& u) {
  return op.apply(u);
}

struct SubspaceSolution {
  Eigen::MatrixXd u;
  SolverMethod method = SolverMethod::kAuto;  // method actually used
  int iterations = 0;                         // 0 for the dense path
  double relative_residual = 0.0;             // ||rhs - A u||_F / ||rhs||_F
};

// Solves op(U) = rhs. The CG path uses a block-Jacobi preconditioner (the
// exact diagonal r x r blocks of the operator) and starts from warm_start
// when given. Throws ConvergenceError when the iteration cap is reached
// above tolerance.
SubspaceSolution solve_subspace(const SubspaceSystemOperator& op,
                                const Eigen::MatrixXd& rhs,
                                const SolverConfig& cfg,
                                const Eigen::MatrixXd* warm_start = nullptr);

// Bartels-Stewart solver for the fully observed update
//
//   lambda1 K^{-1} U + U R = K^{-1} P,   K = I + lambda2 L.
//
// K and L share eigenvectors, so the m-side Schur form is the (cached)
// eigendecomposition of L; the r-side uses a real Schur decomposition of R.
// Construction is O(m^3) once per run; each solve is O(m^2 r + r^3).
class SylvesterSolver {
 public:
  SylvesterSolver(const GraphLaplacian& laplacian, double lambda1,
                  double lambda2);

  Eigen::MatrixXd solve(const Eigen::MatrixXd& gram,
                        const Eigen::MatrixXd& rhs) const;

 private:
  Eigen::MatrixXd basis_;         // eigenvectors of L
  Eigen::VectorXd left_diag_;     // eigenvalues of lambda1 K^{-1}
  Eigen::VectorXd inv_k_diag_;    // eigenvalues of K^{-1}
};

Eigen::MatrixXd solve_sylvester(const GraphLaplacian& laplacian,
                                double lambda1, double lambda2,
                                const Eigen::MatrixXd& gram,
                                const Eigen::MatrixXd& rhs);

}  // namespace graphmc

#endif  // GRAPHMC_SOLVERS_H_
