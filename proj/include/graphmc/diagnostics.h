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

#ifndef GRAPHMC_DIAGNOSTICS_H_
#define GRAPHMC_DIAGNOSTICS_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "graphmc/graph.h"
#include "graphmc/robust.h"
#include "graphmc/tracker.h"

namespace graphmc {

// err(t) = 20 log10( (1/t) sum_{i<=t} ||xhat_i - x_i|| / ||x_i|| ).
// Steps whose truth vector has zero norm are skipped (NaN relative error,
// counted in `skipped`) and do not enter the mean. err_db is -inf while
// every counted relative error is zero.
struct ErrorSeries {
  std::vector<double> relative_error;
  std::vector<double> err_db;
  int skipped = 0;
};

ErrorSeries err_metric(std::span<const Eigen::VectorXd> truth,
                       std::span<const Eigen::VectorXd> predictions);

// Streaming form of err_metric.
class ErrorTracker {
 public:
  // Returns the relative error of this step (NaN if skipped).
  double add(const Eigen::VectorXd& truth, const Eigen::VectorXd& prediction);
  double err_db() const;
  const ErrorSeries& series() const { return series_; }

 private:
  ErrorSeries series_;
  double sum_ = 0.0;
  std::int64_t counted_ = 0;
};

// One step of the stream as needed to re-evaluate the cost functions.
struct HistoryEntry {
  StreamSample sample;
  Eigen::VectorXd coefficients;
  Eigen::VectorXd outliers;
};

// Full stream history for cost diagnostics. Memory grows with t; only
// enable it for diagnostic runs.
class StreamHistory {
 public:
  explicit StreamHistory(bool retain = true, Eigen::MatrixXd anchor = {})
      : retain_(retain), anchor_(std::move(anchor)) {}

  void record(const StreamSample& sample, const Eigen::VectorXd& coefficients,
              const Eigen::VectorXd& outliers);

  bool retained() const { return retain_; }
  std::int64_t steps() const { return steps_; }
  std::span<const HistoryEntry> entries() const { return entries_; }
  // Centre of the subspace ridge; empty means zero.
  const Eigen::MatrixXd& anchor() const { return anchor_; }

 private:
  bool retain_;
  std::int64_t steps_ = 0;
  std::vector<HistoryEntry> entries_;
  Eigen::MatrixXd anchor_;
};

// g(U, r, s) = 1/2 ||Omega (x - U r - s)||^2 + lambda1/2 ||r||^2
//            + lambda2/2 r^T U^T L U r + lambda3/2 ||s||_1.
// The l1 weight is lambda3/2 so that 2 g(U, B(x - s), s) equals the lasso
// objective ||C (x - s)||^2 + lambda3 ||s||_1 exactly.
double sample_cost(const Eigen::MatrixXd& u, const StreamSample& sample,
                   const Eigen::VectorXd& coefficients,
                   const Eigen::VectorXd& outliers,
                   const GraphLaplacian& laplacian, const Hyperparameters& hp);

struct InnerMinimum {
  Eigen::VectorXd coefficients;
  Eigen::VectorXd outliers;
  double value = 0.0;
};

// min over (r, s) of sample_cost at fixed U. s is pinned to 0 when
// lambda3 == 0 (outlier estimation off), matching robust_step.
InnerMinimum minimize_sample_cost(const Eigen::MatrixXd& u,
                                  const StreamSample& sample,
                                  const GraphLaplacian& laplacian,
                                  const Hyperparameters& hp,
                                  const LassoSettings& lasso = {1e-10, 0});

struct CostSnapshot {
  double c_hat = 0.0;   // (1/t) sum g_tau(U, r_tau, s_tau) + lambda1/(2t)||U - U_0||^2
  double c_true = 0.0;  // (1/t) sum min g_tau(U, ., .)   + lambda1/(2t)||U - U_0||^2
  double gap = 0.0;     // c_hat - c_true, >= 0 up to inner-solver tolerance
};

// Surrogate cost only; O(t) cheap evaluations.
double surrogate_cost(const StreamHistory& history, const Eigen::MatrixXd& u,
                      const GraphLaplacian& laplacian,
                      const Hyperparameters& hp);

// Throws UnsupportedError when the history was not retained.
CostSnapshot surrogate_and_true_cost(const StreamHistory& history,
                                     const Eigen::MatrixXd& u,
                                     const GraphLaplacian& laplacian,
                                     const Hyperparameters& hp,
                                     const LassoSettings& lasso = {1e-10, 0});

// Gradient of g(U) = min_{r,s} g(U, r, s) with the minimizers held fixed:
//   Omega (U r + s - x) r^T + lambda2 L U r r^T        (m x r)
Eigen::MatrixXd sample_cost_gradient(const Eigen::MatrixXd& u,
                                     const StreamSample& sample,
                                     const Eigen::VectorXd& coefficients,
                                     const Eigen::VectorXd& outliers,
                                     const GraphLaplacian& laplacian,
                                     const Hyperparameters& hp);

// Gradient of the true cost C_t at U (m x r), re-minimizing every sample.
Eigen::MatrixXd true_cost_gradient(const StreamHistory& history,
                                   const Eigen::MatrixXd& u,
                                   const GraphLaplacian& laplacian,
                                   const Hyperparameters& hp,
                                   const LassoSettings& lasso = {1e-10, 0});

struct GradientCheck {
  Eigen::MatrixXd analytic;
  Eigen::MatrixXd finite_difference;
  // max |fd - analytic| / max |analytic| (0 when both vanish).
  double max_relative_deviation = 0.0;
};

// Central differences of g(U) with step h = 1e-5 (1 + ||U||_F).
GradientCheck gradient_check(const Eigen::MatrixXd& u,
                             const StreamSample& sample,
                             const GraphLaplacian& laplacian,
                             const Hyperparameters& hp);

// ||lambda1 U + lambda2 L U R + sum Omega U r r^T - b||_F / (1 + ||b||_F)
// with b = P + lambda1 U_0.
double stationarity_residual(const AccumulatorSet& acc,
                             const GraphLaplacian& laplacian,
                             const Hyperparameters& hp,
                             const Eigen::MatrixXd& u);

// Smallest eigenvalue of the subspace operator scaled by 1/t. Materializes
// the mr x mr matrix, so keep it to small problems.
double strong_convexity_margin(const AccumulatorSet& acc,
                               const GraphLaplacian& laplacian,
                               const Hyperparameters& hp, std::int64_t t);

struct DiagnosticRow {
  std::int64_t t = 0;
  double err_db = 0.0;
  double c_hat = 0.0;
  double c_true = 0.0;
  double grad_norm = 0.0;
  double stat_residual = 0.0;
};

// Header: t,err_db,c_hat,c_true,grad_norm,stat_residual
void write_diagnostics_csv(std::ostream& out, std::span<const DiagnosticRow> rows);

}  // namespace graphmc

#endif  // GRAPHMC_DIAGNOSTICS_H_
