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

#include "graphmc/robust.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "graphmc/errors.h"

namespace graphmc {

OutlierVector OutlierVector::from_dense(const Eigen::VectorXd& s) {
  OutlierVector out;
  out.dimension_ = static_cast<int>(s.size());
  const auto nnz = (s.array() != 0.0).count();
  if (static_cast<double>(nnz) >
      kOutlierDenseFraction * static_cast<double>(s.size())) {
    out.dense_ = true;
    out.dense_values_ = s;
    return out;
  }
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) != 0.0) {
      out.index_.push_back(static_cast<int>(i));
      out.value_.push_back(s(i));
    }
  }
  return out;
}

Eigen::VectorXd OutlierVector::to_dense() const {
  if (dense_) return dense_values_;
  Eigen::VectorXd s = Eigen::VectorXd::Zero(dimension_);
  for (std::size_t k = 0; k < index_.size(); ++k) s(index_[k]) = value_[k];
  return s;
}

int OutlierVector::nonzeros() const {
  if (dense_) return static_cast<int>((dense_values_.array() != 0.0).count());
  return static_cast<int>(index_.size());
}

std::vector<int> OutlierVector::support() const {
  if (!dense_) return index_;
  std::vector<int> out;
  for (Eigen::Index i = 0; i < dense_values_.size(); ++i) {
    if (dense_values_(i) != 0.0) out.push_back(static_cast<int>(i));
  }
  return out;
}

LassoProblem assemble_lasso(const Eigen::MatrixXd& u,
                            const StreamSample& sample,
                            const GraphLaplacian& laplacian,
                            const Hyperparameters& hp) {
  if (!(hp.lambda1 > 0.0)) throw ValidationError("lambda1 must be positive");
  const CoefficientSystem sys = coefficient_system(u, sample, laplacian, hp);
  const int m = static_cast<int>(u.rows());
  const int r = static_cast<int>(u.cols());
  const Eigen::VectorXd omega = sample.mask_diagonal();

  LassoProblem prob;
  prob.target = sample.values;
  prob.penalty = hp.lambda3;
  prob.projection =
      sys.a.llt().solve(u.transpose() * omega.asDiagonal());  // B, r x m
  const Eigen::MatrixXd ub = u * prob.projection;

  prob.design = Eigen::MatrixXd::Zero(2 * m + r, m);
  prob.design.topRows(m) = omega.asDiagonal() * (Eigen::MatrixXd::Identity(m, m) - ub);
  prob.design.middleRows(m, r) = std::sqrt(hp.lambda1) * prob.projection;
  if (hp.lambda2 != 0.0) {
    prob.design.bottomRows(m) = std::sqrt(hp.lambda2) * laplacian.sqrt() * ub;
  }
  prob.gram = prob.design.transpose() * prob.design;
  prob.gram = (0.5 * (prob.gram + prob.gram.transpose())).eval();
  return prob;
}

double lasso_objective(const LassoProblem& prob, const Eigen::VectorXd& s) {
  return (prob.design * (prob.target - s)).squaredNorm() +
         prob.penalty * s.lpNorm<1>();
}

namespace {

double kkt_from_gradient(const Eigen::VectorXd& hw, const Eigen::VectorXd& s,
                         double penalty) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < s.size(); ++j) {
    const double g = 2.0 * hw(j);
    double v;
    if (s(j) > 0.0) {
      v = std::abs(g - penalty);
    } else if (s(j) < 0.0) {
      v = std::abs(g + penalty);
    } else {
      v = std::max(0.0, std::abs(g) - penalty);
    }
    worst = std::max(worst, v);
  }
  return worst;
}

double soft_threshold(double z, double threshold) {
  if (z > threshold) return z - threshold;
  if (z < -threshold) return z + threshold;
  return 0.0;
}

}  // namespace

double lasso_kkt_violation(const LassoProblem& prob, const Eigen::VectorXd& s) {
  return kkt_from_gradient(prob.gram * (prob.target - s), s, prob.penalty);
}

LassoSolution solve_lasso(const LassoProblem& prob) {
  if (!(prob.penalty >= 0.0)) throw ValidationError("lasso penalty must be >= 0");
  const int m = prob.dimension();
  if (prob.gram.rows() != m || prob.gram.cols() != m) {
    throw ValidationError("lasso gram matrix does not match target length");
  }
  const int max_sweeps = prob.max_iters > 0 ? prob.max_iters : 100 * m;
  const Eigen::MatrixXd& h = prob.gram;

  LassoSolution out;
  out.s = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd hw = h * prob.target;
  out.kkt_violation = kkt_from_gradient(hw, out.s, prob.penalty);
  if (prob.record_objective) {
    out.objective_trace.push_back(lasso_objective(prob, out.s));
  }
  while (out.kkt_violation > prob.tolerance) {
    if (out.sweeps >= max_sweeps) {
      std::ostringstream os;
      os << "lasso coordinate descent did not converge in " << max_sweeps
         << " sweeps (KKT violation " << out.kkt_violation << ")";
      throw ConvergenceError(os.str(), out.kkt_violation, out.sweeps);
    }
    for (int j = 0; j < m; ++j) {
      const double hjj = h(j, j);
      if (!(hjj > 0.0)) continue;  // column of C is zero
      const double next = soft_threshold(out.s(j) + hw(j) / hjj,
                                         prob.penalty / (2.0 * hjj));
      const double delta = next - out.s(j);
      if (delta == 0.0) continue;
      out.s(j) = next;
      hw.noalias() -= delta * h.col(j);
    }
    ++out.sweeps;
    hw.noalias() = h * (prob.target - out.s);
    out.kkt_violation = kkt_from_gradient(hw, out.s, prob.penalty);
    if (prob.record_objective) {
      out.objective_trace.push_back(lasso_objective(prob, out.s));
    }
  }

  std::vector<int> support;
  for (int j = 0; j < m; ++j) {
    if (out.s(j) != 0.0) support.push_back(j);
  }
  if (!support.empty()) {
    const auto k = static_cast<Eigen::Index>(support.size());
    Eigen::MatrixXd sub(k, k);
    for (Eigen::Index a = 0; a < k; ++a) {
      for (Eigen::Index b = 0; b < k; ++b) {
        sub(a, b) = h(support[static_cast<std::size_t>(a)],
                      support[static_cast<std::size_t>(b)]);
      }
    }
    out.support_curvature =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sub, Eigen::EigenvaluesOnly)
            .eigenvalues()(0);
  }
  return out;
}

Eigen::VectorXd compute_robust_coefficients(const Eigen::MatrixXd& u,
                                           const StreamSample& sample,
                                           const GraphLaplacian& laplacian,
                                           const Hyperparameters& hp,
                                           const Eigen::VectorXd& outliers) {
  if (outliers.size() != sample.dimension()) {
    throw ValidationError("outlier vector length does not match sample");
  }
  const StreamSample cleaned =
      StreamSample::make(sample.values - outliers, sample.observed);
  return compute_coefficients(u, cleaned, laplacian, hp);
}

RobustStepResult robust_step(SubspaceState& state, AccumulatorSet& acc,
                             const StreamSample& sample,
                             const GraphLaplacian& laplacian,
                             const Hyperparameters& hp,
                             const SolverConfig& cfg,
                             const TrackerOptions& opts,
                             const LassoSettings& lasso) {
  RobustStepResult out;
  Eigen::VectorXd s = Eigen::VectorXd::Zero(sample.dimension());
  if (hp.lambda3 > 0.0) {
    LassoProblem prob = assemble_lasso(state.u, sample, laplacian, hp);
    prob.tolerance = lasso.tolerance;
    prob.max_iters = lasso.max_iters;
    out.lasso = solve_lasso(prob);
    s = out.lasso.s;
  } else {
    out.lasso.s = s;
  }
  out.outliers = OutlierVector::from_dense(s);
  out.coefficients =
      compute_robust_coefficients(state.u, sample, laplacian, hp, s);
  out.reconstruction = state.u * out.coefficients;
  out.clean_values = sample.observed.select((sample.values - s).array(), 0.0);
  update_accumulators(acc, sample, out.coefficients, out.clean_values,
                      opts.forgetting);
  out.solve = update_subspace(acc, laplacian, hp, cfg, state.u);
  state.u = out.solve.u;
  ++state.t;
  if (opts.predict_after_update) {
    out.reconstruction = state.u * out.coefficients;
  }
  return out;
}

RobustTracker::RobustTracker(GraphLaplacian laplacian, Hyperparameters hp,
                             SolverConfig cfg, SubspaceState initial,
                             TrackerOptions opts, LassoSettings lasso)
    : laplacian_(std::move(laplacian)),
      hp_(hp),
      cfg_(cfg),
      opts_(opts),
      lasso_(lasso),
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

RobustStepResult RobustTracker::step(const StreamSample& sample) {
  return robust_step(state_, acc_, sample, laplacian_, hp_, cfg_, opts_,
                     lasso_);
}

}  // namespace graphmc
