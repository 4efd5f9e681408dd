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

#ifndef GRAPHMC_ROBUST_H_
#define GRAPHMC_ROBUST_H_

#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "graphmc/graph.h"
#include "graphmc/solvers.h"
#include "graphmc/tracker.h"

namespace graphmc {

// Per-step outlier estimate. Stored as (index, value) pairs while sparse and
// as a dense vector once more than a quarter of the entries are nonzero.
class OutlierVector {
 public:
  OutlierVector() = default;
  static OutlierVector from_dense(const Eigen::VectorXd& s);

  Eigen::VectorXd to_dense() const;
  int dimension() const { return dimension_; }
  int nonzeros() const;
  bool stored_dense() const { return dense_; }
  // Sorted indices of nonzero entries.
  std::vector<int> support() const;

 private:
  int dimension_ = 0;
  bool dense_ = false;
  Eigen::VectorXd dense_values_;
  std::vector<int> index_;
  std::vector<double> value_;
};

inline constexpr double kOutlierDenseFraction = 0.25;

// min_s ||C (x - s)||^2 + penalty ||s||_1 with
//   C = [ Omega (I - U B) ; sqrt(lambda1) B ; sqrt(lambda2) L^{1/2} U B ],
//   B = A^{-1} U^T Omega,  A = lambda1 I + U^T (Omega + lambda2 L) U.
// Substituting r = B (x - s) into the joint (r, s) objective yields this
// problem exactly.
struct LassoProblem {
  Eigen::MatrixXd design;        // C, (2m + r) x m
  Eigen::VectorXd target;        // x
  double penalty = 0.0;          // lambda3
  double tolerance = 1e-8;       // KKT infinity-norm exit threshold
  int max_iters = 0;             // coordinate sweeps; 0 selects 100 m
  bool record_objective = false;

  Eigen::MatrixXd gram;          // C^T C
  Eigen::MatrixXd projection;    // B, maps x - s to the coefficients

  int dimension() const { return static_cast<int>(target.size()); }
};

LassoProblem assemble_lasso(const Eigen::MatrixXd& u,
                            const StreamSample& sample,
                            const GraphLaplacian& laplacian,
                            const Hyperparameters& hp);

double lasso_objective(const LassoProblem& prob, const Eigen::VectorXd& s);

// Largest violation of the optimality conditions
//   s_j != 0:  2 [C^T C (x - s)]_j = penalty * sign(s_j)
//   s_j == 0:  |2 [C^T C (x - s)]_j| <= penalty
double lasso_kkt_violation(const LassoProblem& prob, const Eigen::VectorXd& s);

struct LassoSolution {
  Eigen::VectorXd s;
  int sweeps = 0;
  double kkt_violation = 0.0;
  // Smallest eigenvalue of C^T C restricted to the support; +inf for an
  // empty support. Near zero flags a non-unique solution.
  double support_curvature = std::numeric_limits<double>::infinity();
  std::vector<double> objective_trace;  // per sweep, when requested
};

// Cyclic coordinate descent from s = 0 with exact soft-threshold updates.
// Coordinates with zero curvature (unobserved entries) stay at 0. Throws
// ConvergenceError if the KKT test still fails after max_iters sweeps.
LassoSolution solve_lasso(const LassoProblem& prob);

// r = B (x - s); identical to compute_coefficients on the cleaned sample.
Eigen::VectorXd compute_robust_coefficients(const Eigen::MatrixXd& u,
                                           const StreamSample& sample,
                                           const GraphLaplacian& laplacian,
                                           const Hyperparameters& hp,
                                           const Eigen::VectorXd& outliers);

struct LassoSettings {
  double tolerance = 1e-8;
  int max_iters = 0;  // 0 selects 100 m
};

struct RobustStepResult {
  OutlierVector outliers;
  Eigen::VectorXd coefficients;
  Eigen::VectorXd clean_values;   // x - s
  Eigen::VectorXd reconstruction; // U r (low-rank part only)
  SubspaceSolution solve;
  LassoSolution lasso;
};

// Robust pass: lasso for s_t at U_{t-1}, coefficients from the cleaned
// sample, accumulator update with x_t - s_t, subspace solve. A zero lambda3
// switches outlier estimation off (s_t = 0), reproducing the plain tracker.
RobustStepResult robust_step(SubspaceState& state, AccumulatorSet& acc,
                             const StreamSample& sample,
                             const GraphLaplacian& laplacian,
                             const Hyperparameters& hp,
                             const SolverConfig& cfg,
                             const TrackerOptions& opts = {},
                             const LassoSettings& lasso = {});

class RobustTracker {
 public:
  RobustTracker(GraphLaplacian laplacian, Hyperparameters hp, SolverConfig cfg,
                SubspaceState initial, TrackerOptions opts = {},
                LassoSettings lasso = {});

  RobustStepResult step(const StreamSample& sample);

  const SubspaceState& state() const { return state_; }
  const AccumulatorSet& accumulators() const { return acc_; }
  const GraphLaplacian& laplacian() const { return laplacian_; }
  const Hyperparameters& hyperparameters() const { return hp_; }

 private:
  GraphLaplacian laplacian_;
  Hyperparameters hp_;
  SolverConfig cfg_;
  TrackerOptions opts_;
  LassoSettings lasso_;
  SubspaceState state_;
  AccumulatorSet acc_;
};

}  // namespace graphmc

#endif  // GRAPHMC_ROBUST_H_
