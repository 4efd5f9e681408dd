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

#include "graphmc/tracker.h"

#include <cmath>
#include <utility>

#include "graphmc/errors.h"
#include "graphmc/rng.h"

namespace graphmc {

StreamSample StreamSample::make(const Eigen::VectorXd& values,
                                const Mask& observed) {
  if (values.size() != observed.size()) {
    throw ValidationError("sample values and mask differ in length");
  }
  StreamSample s;
  s.values = observed.select(values.array(), 0.0).matrix();
  s.observed = observed;
  return s;
}

StreamSample StreamSample::fully_observed(const Eigen::VectorXd& values) {
  return make(values, Mask::Constant(values.size(), true));
}

void Hyperparameters::validate() const {
  if (!(lambda1 > 0.0) || !std::isfinite(lambda1)) {
    throw ValidationError("lambda1 must be positive");
  }
  if (!(lambda2 >= 0.0) || !std::isfinite(lambda2)) {
    throw ValidationError("lambda2 must be non-negative");
  }
  if (!(lambda3 >= 0.0) || std::isnan(lambda3)) {
    throw ValidationError("lambda3 must be non-negative");
  }
  if (rank < 1) throw ValidationError("rank must be at least 1");
}

void TrackerOptions::validate() const {
  if (!(forgetting > 0.0 && forgetting <= 1.0)) {
    throw ValidationError("forgetting factor must lie in (0, 1]");
  }
}

SubspaceState SubspaceState::random_init(int m, int rank, std::uint64_t seed) {
  if (m < 1 || rank < 1) throw ValidationError("random_init: bad dimensions");
  Rng rng(seed, streams::kInit);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  SubspaceState s;
  s.u.resize(m, rank);
  // Row-major fill order so the stream does not depend on storage order.
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < rank; ++j) s.u(i, j) = scale * rng.normal();
  }
  return s;
}

AccumulatorSet AccumulatorSet::zeros(int m, int rank) {
  AccumulatorSet acc;
  acc.gram = Eigen::MatrixXd::Zero(rank, rank);
  acc.rhs = Eigen::MatrixXd::Zero(m, rank);
  acc.row_grams.assign(static_cast<std::size_t>(m),
                       Eigen::MatrixXd::Zero(rank, rank));
  acc.anchor = Eigen::MatrixXd::Zero(m, rank);
  return acc;
}

AccumulatorSet AccumulatorSet::anchored(const Eigen::MatrixXd& u0) {
  AccumulatorSet acc = zeros(static_cast<int>(u0.rows()), static_cast<int>(u0.cols()));
  acc.anchor = u0;
  return acc;
}

namespace {

void check_shapes(const Eigen::MatrixXd& u, const StreamSample& sample,
                  const GraphLaplacian& laplacian) {
  if (sample.values.size() != sample.observed.size()) {
    throw ValidationError("sample values and mask differ in length");
  }
  if (u.rows() != sample.dimension() || u.rows() != laplacian.size()) {
    throw ValidationError("dimension mismatch: U has " +
                          std::to_string(u.rows()) + " rows, sample has " +
                          std::to_string(sample.dimension()) +
                          ", graph has " + std::to_string(laplacian.size()));
  }
}

}  // namespace

CoefficientSystem coefficient_system(const Eigen::MatrixXd& u,
                                     const StreamSample& sample,
                                     const GraphLaplacian& laplacian,
                                     const Hyperparameters& hp) {
  check_shapes(u, sample, laplacian);
  const Eigen::VectorXd omega = sample.mask_diagonal();
  CoefficientSystem sys;
  sys.a = u.transpose() * omega.asDiagonal() * u;
  if (hp.lambda2 != 0.0) {
    sys.a.noalias() += hp.lambda2 * u.transpose() * (laplacian.matrix() * u);
  }
  sys.a = (0.5 * (sys.a + sys.a.transpose())).eval();
  sys.a.diagonal().array() += hp.lambda1;
  sys.b = u.transpose() * omega.cwiseProduct(sample.values);
  return sys;
}

Eigen::VectorXd compute_coefficients(const Eigen::MatrixXd& u,
                                     const StreamSample& sample,
                                     const GraphLaplacian& laplacian,
                                     const Hyperparameters& hp) {
  if (!(hp.lambda1 > 0.0)) throw ValidationError("lambda1 must be positive");
  const CoefficientSystem sys = coefficient_system(u, sample, laplacian, hp);
  return sys.a.llt().solve(sys.b);
}

void update_accumulators(AccumulatorSet& acc, const StreamSample& sample,
                         const Eigen::VectorXd& coefficients,
                         const Eigen::VectorXd& clean_values,
                         double forgetting) {
  const int m = acc.rows();
  if (sample.dimension() != m || clean_values.size() != m ||
      coefficients.size() != acc.rank()) {
    throw ValidationError("update_accumulators: dimension mismatch");
  }
  const Eigen::MatrixXd outer = coefficients * coefficients.transpose();
  if (forgetting != 1.0) {
    acc.gram *= forgetting;
    acc.rhs *= forgetting;
    for (auto& g : acc.row_grams) g *= forgetting;
  }
  acc.gram += outer;
  for (int i = 0; i < m; ++i) {
    if (!sample.observed(i)) continue;
    acc.rhs.row(i) += clean_values(i) * coefficients.transpose();
    acc.row_grams[static_cast<std::size_t>(i)] += outer;
  }
}

SubspaceSolution update_subspace(const AccumulatorSet& acc,
                                 const GraphLaplacian& laplacian,
                                 const Hyperparameters& hp,
                                 const SolverConfig& cfg,
                                 const Eigen::MatrixXd& warm_start) {
  const SubspaceSystemOperator op = acc.make_operator(laplacian, hp);
  return solve_subspace(op, acc.system_rhs(hp), cfg, &warm_start);
}

StepResult step(SubspaceState& state, AccumulatorSet& acc,
                const StreamSample& sample, const GraphLaplacian& laplacian,
                const Hyperparameters& hp, const SolverConfig& cfg,
                const TrackerOptions& opts) {
  StepResult out;
  out.coefficients = compute_coefficients(state.u, sample, laplacian, hp);
  out.reconstruction = state.u * out.coefficients;
  update_accumulators(acc, sample, out.coefficients, sample.values,
                      opts.forgetting);
  out.solve = update_subspace(acc, laplacian, hp, cfg, state.u);
  state.u = out.solve.u;
  ++state.t;
  if (opts.predict_after_update) {
    out.reconstruction = state.u * out.coefficients;
  }
  return out;
}

OnlineTracker::OnlineTracker(GraphLaplacian laplacian, Hyperparameters hp,
                             SolverConfig cfg, SubspaceState initial,
                             TrackerOptions opts)
    : laplacian_(std::move(laplacian)),
      hp_(hp),
      cfg_(cfg),
      opts_(opts),
      state_(std::move(initial)) {
  hp_.validate();
  cfg_.validate();
  opts_.validate();
  if (state_.u.rows() != laplacian_.size() || state_.u.cols() != hp_.rank) {
    throw ValidationError("initial subspace does not match graph size / rank");
  }
  acc_ = opts_.anchor_initial
             ? AccumulatorSet::anchored(state_.u)
             : AccumulatorSet::zeros(laplacian_.size(), hp_.rank);
}

StepResult OnlineTracker::step(const StreamSample& sample) {
  return graphmc::step(state_, acc_, sample, laplacian_, hp_, cfg_, opts_);
}

}  // namespace graphmc
