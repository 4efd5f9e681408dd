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

#ifndef GRAPHMC_TRACKER_H_
#define GRAPHMC_TRACKER_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "graphmc/graph.h"
#include "graphmc/solvers.h"

namespace graphmc {

using Mask = Eigen::Array<bool, Eigen::Dynamic, 1>;

// One revealed column. Unobserved entries of `values` are held at 0 and
// never read; `observed` is authoritative.
struct StreamSample {
  Eigen::VectorXd values;
  Mask observed;

  // Copies `values` and zeroes every entry the mask marks as missing.
  static StreamSample make(const Eigen::VectorXd& values, const Mask& observed);
  static StreamSample fully_observed(const Eigen::VectorXd& values);

  int dimension() const { return static_cast<int>(values.size()); }
  int observed_count() const { return static_cast<int>(observed.count()); }
  // Diagonal of Omega_t as 0/1 doubles.
  Eigen::VectorXd mask_diagonal() const { return observed.cast<double>(); }
};

struct Hyperparameters {
  double lambda1 = 0.1;  // ridge on coefficients and subspace; must be > 0
  double lambda2 = 0.0;  // graph smoothness weight
  double lambda3 = 0.0;  // outlier sparsity weight (robust mode only)
  int rank = 1;

  void validate() const;
};

struct SubspaceState {
  Eigen::MatrixXd u;  // m x r
  std::int64_t t = 0;

  // Entries i.i.d. N(0, 1/m) from the seeded initialization stream.
  static SubspaceState random_init(int m, int rank, std::uint64_t seed);
};

// Running sums over the stream, of fixed size Theta(m r^2):
//   gram       R = sum r_t r_t^T
//   rhs        P = sum Omega_t x_t r_t^T   (Q with x_t - s_t in robust mode)
//   row_grams  M_i = sum_{t : row i observed} r_t r_t^T
//   anchor     centre U_0 of the ridge lambda1/2 ||U - U_0||^2 (zero for the
//              plain ridge lambda1/2 ||U||^2)
//
// With a zero anchor every U_t after the first step has rank one in exact
// arithmetic (all r_t are parallel to r_1), so trackers anchor the ridge at
// their initial subspace unless told otherwise.
struct AccumulatorSet {
  Eigen::MatrixXd gram;
  Eigen::MatrixXd rhs;
  std::vector<Eigen::MatrixXd> row_grams;
  Eigen::MatrixXd anchor;

  static AccumulatorSet zeros(int m, int rank);
  static AccumulatorSet anchored(const Eigen::MatrixXd& u0);

  int rows() const { return static_cast<int>(rhs.rows()); }
  int rank() const { return static_cast<int>(gram.rows()); }

  // Right-hand side of the subspace system: P + lambda1 U_0.
  Eigen::MatrixXd system_rhs(const Hyperparameters& hp) const {
    return rhs + hp.lambda1 * anchor;
  }

  SubspaceSystemOperator make_operator(const GraphLaplacian& laplacian,
                                       const Hyperparameters& hp) const {
    return SubspaceSystemOperator(row_grams, gram, laplacian, hp.lambda1,
                                  hp.lambda2);
  }
};

// Normal equations of the per-step coefficient problem:
//   a = lambda1 I + U^T (Omega + lambda2 L) U,   b = U^T Omega x.
struct CoefficientSystem {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
};

CoefficientSystem coefficient_system(const Eigen::MatrixXd& u,
                                     const StreamSample& sample,
                                     const GraphLaplacian& laplacian,
                                     const Hyperparameters& hp);

// r_t = a^{-1} b, the unique minimizer of
//   1/2 ||Omega (x - U r)||^2 + lambda1/2 ||r||^2 + lambda2/2 r^T U^T L U r.
Eigen::VectorXd compute_coefficients(const Eigen::MatrixXd& u,
                                     const StreamSample& sample,
                                     const GraphLaplacian& laplacian,
                                     const Hyperparameters& hp);

// Adds step t to the sums, after scaling the old sums by `forgetting`
// (1.0 keeps the plain unweighted sums). `clean_values` is x_t for the
// plain tracker and x_t - s_t for the robust one; only observed entries
// are read.
void update_accumulators(AccumulatorSet& acc, const StreamSample& sample,
                         const Eigen::VectorXd& coefficients,
                         const Eigen::VectorXd& clean_values,
                         double forgetting = 1.0);

// Solves lambda1 U + lambda2 L U R + sum Omega U r r^T = P + lambda1 U_0.
SubspaceSolution update_subspace(const AccumulatorSet& acc,
                                 const GraphLaplacian& laplacian,
                                 const Hyperparameters& hp,
                                 const SolverConfig& cfg,
                                 const Eigen::MatrixXd& warm_start);

struct TrackerOptions {
  // Accumulator decay in (0, 1]; 1 reproduces the unweighted sums.
  double forgetting = 1.0;
  // Report U_t r_t instead of the default U_{t-1} r_t as the reconstruction.
  bool predict_after_update = false;
  // Centre the subspace ridge at the initial subspace. Off reproduces the
  // plain ridge, under which U_t collapses to rank one after step 1.
  bool anchor_initial = true;

  void validate() const;
};

struct StepResult {
  Eigen::VectorXd coefficients;
  Eigen::VectorXd reconstruction;
  SubspaceSolution solve;
};

// One pass of the plain tracker: coefficients from U_{t-1}, accumulator
// update, subspace solve. Advances `state` and `acc` in place.
StepResult step(SubspaceState& state, AccumulatorSet& acc,
                const StreamSample& sample, const GraphLaplacian& laplacian,
                const Hyperparameters& hp, const SolverConfig& cfg,
                const TrackerOptions& opts = {});

// Owns the state of one stream for the plain (non-robust) tracker.
class OnlineTracker {
 public:
  OnlineTracker(GraphLaplacian laplacian, Hyperparameters hp,
                SolverConfig cfg, SubspaceState initial,
                TrackerOptions opts = {});

  StepResult step(const StreamSample& sample);

  const SubspaceState& state() const { return state_; }
  const AccumulatorSet& accumulators() const { return acc_; }
  const GraphLaplacian& laplacian() const { return laplacian_; }
  const Hyperparameters& hyperparameters() const { return hp_; }

 private:
  GraphLaplacian laplacian_;
  Hyperparameters hp_;
  SolverConfig cfg_;
  TrackerOptions opts_;
  SubspaceState state_;
  AccumulatorSet acc_;
};

}  // namespace graphmc

#endif  // GRAPHMC_TRACKER_H_
