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

#include "graphmc/diagnostics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "graphmc/errors.h"
#include "graphmc/text_io.h"

namespace graphmc {

double ErrorTracker::add(const Eigen::VectorXd& truth,
                         const Eigen::VectorXd& prediction) {
  if (truth.size() != prediction.size()) {
    throw ValidationError("err_metric: truth and prediction differ in length");
  }
  const double norm = truth.norm();
  double rel = std::numeric_limits<double>::quiet_NaN();
  if (norm > 0.0) {
    rel = (prediction - truth).norm() / norm;
    sum_ += rel;
    ++counted_;
  } else {
    ++series_.skipped;
  }
  series_.relative_error.push_back(rel);
  series_.err_db.push_back(err_db());
  return rel;
}

double ErrorTracker::err_db() const {
  if (counted_ == 0 || sum_ == 0.0) {
    return -std::numeric_limits<double>::infinity();
  }
  return 20.0 * std::log10(sum_ / static_cast<double>(counted_));
}

ErrorSeries err_metric(std::span<const Eigen::VectorXd> truth,
                       std::span<const Eigen::VectorXd> predictions) {
  if (truth.size() != predictions.size()) {
    throw ValidationError("err_metric: " + std::to_string(truth.size()) +
                          " truth vectors vs " +
                          std::to_string(predictions.size()) + " predictions");
  }
  ErrorTracker tracker;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    tracker.add(truth[i], predictions[i]);
  }
  return tracker.series();
}

void StreamHistory::record(const StreamSample& sample,
                           const Eigen::VectorXd& coefficients,
                           const Eigen::VectorXd& outliers) {
  ++steps_;
  if (retain_) entries_.push_back({sample, coefficients, outliers});
}

double sample_cost(const Eigen::MatrixXd& u, const StreamSample& sample,
                   const Eigen::VectorXd& coefficients,
                   const Eigen::VectorXd& outliers,
                   const GraphLaplacian& laplacian, const Hyperparameters& hp) {
  const Eigen::VectorXd fitted = u * coefficients;
  const Eigen::VectorXd resid =
      sample.observed.select((sample.values - fitted - outliers).array(), 0.0)
          .matrix();
  double cost = 0.5 * resid.squaredNorm() +
                0.5 * hp.lambda1 * coefficients.squaredNorm() +
                0.5 * hp.lambda3 * outliers.lpNorm<1>();
  if (hp.lambda2 != 0.0) {
    cost += 0.5 * hp.lambda2 * fitted.dot(laplacian.matrix() * fitted);
  }
  return cost;
}

InnerMinimum minimize_sample_cost(const Eigen::MatrixXd& u,
                                  const StreamSample& sample,
                                  const GraphLaplacian& laplacian,
                                  const Hyperparameters& hp,
                                  const LassoSettings& lasso) {
  InnerMinimum out;
  out.outliers = Eigen::VectorXd::Zero(sample.dimension());
  if (hp.lambda3 > 0.0) {
    LassoProblem prob = assemble_lasso(u, sample, laplacian, hp);
    prob.tolerance = lasso.tolerance;
    prob.max_iters = lasso.max_iters;
    out.outliers = solve_lasso(prob).s;
  }
  out.coefficients =
      compute_robust_coefficients(u, sample, laplacian, hp, out.outliers);
  out.value =
      sample_cost(u, sample, out.coefficients, out.outliers, laplacian, hp);
  return out;
}

namespace {

void require_history(const StreamHistory& history) {
  if (!history.retained()) {
    throw UnsupportedError(
        "cost diagnostics need the full stream history; enable diagnostics "
        "mode before running");
  }
  if (history.steps() == 0) {
    throw UnsupportedError("cost diagnostics need at least one step");
  }
}

double anchored_ridge(const StreamHistory& history, const Eigen::MatrixXd& u,
                      const Hyperparameters& hp) {
  const Eigen::MatrixXd& anchor = history.anchor();
  if (anchor.size() == 0) return 0.5 * hp.lambda1 * u.squaredNorm();
  if (anchor.rows() != u.rows() || anchor.cols() != u.cols()) {
    throw ValidationError("history anchor does not match U");
  }
  return 0.5 * hp.lambda1 * (u - anchor).squaredNorm();
}

}  // namespace

double surrogate_cost(const StreamHistory& history, const Eigen::MatrixXd& u,
                      const GraphLaplacian& laplacian,
                      const Hyperparameters& hp) {
  require_history(history);
  const double ridge = anchored_ridge(history, u, hp);
  double sum = 0.0;
  for (const HistoryEntry& e : history.entries()) {
    sum += sample_cost(u, e.sample, e.coefficients, e.outliers, laplacian, hp);
  }
  const auto t = static_cast<double>(history.steps());
  return (sum + ridge) / t;
}

CostSnapshot surrogate_and_true_cost(const StreamHistory& history,
                                     const Eigen::MatrixXd& u,
                                     const GraphLaplacian& laplacian,
                                     const Hyperparameters& hp,
                                     const LassoSettings& lasso) {
  require_history(history);
  double surrogate = 0.0;
  double minimized = 0.0;
  for (const HistoryEntry& e : history.entries()) {
    surrogate +=
        sample_cost(u, e.sample, e.coefficients, e.outliers, laplacian, hp);
    minimized += minimize_sample_cost(u, e.sample, laplacian, hp, lasso).value;
  }
  const auto t = static_cast<double>(history.steps());
  const double ridge = anchored_ridge(history, u, hp);
  CostSnapshot snap;
  snap.c_hat = (surrogate + ridge) / t;
  snap.c_true = (minimized + ridge) / t;
  snap.gap = snap.c_hat - snap.c_true;
  return snap;
}

Eigen::MatrixXd sample_cost_gradient(const Eigen::MatrixXd& u,
                                     const StreamSample& sample,
                                     const Eigen::VectorXd& coefficients,
                                     const Eigen::VectorXd& outliers,
                                     const GraphLaplacian& laplacian,
                                     const Hyperparameters& hp) {
  const Eigen::VectorXd fitted = u * coefficients;
  const Eigen::VectorXd resid =
      sample.observed.select((fitted + outliers - sample.values).array(), 0.0)
          .matrix();
  Eigen::MatrixXd grad = resid * coefficients.transpose();
  if (hp.lambda2 != 0.0) {
    grad.noalias() +=
        hp.lambda2 * (laplacian.matrix() * fitted) * coefficients.transpose();
  }
  return grad;
}

Eigen::MatrixXd true_cost_gradient(const StreamHistory& history,
                                   const Eigen::MatrixXd& u,
                                   const GraphLaplacian& laplacian,
                                   const Hyperparameters& hp,
                                   const LassoSettings& lasso) {
  require_history(history);
  Eigen::MatrixXd grad = hp.lambda1 * u;
  if (history.anchor().size() != 0) grad -= hp.lambda1 * history.anchor();
  for (const HistoryEntry& e : history.entries()) {
    const InnerMinimum best =
        minimize_sample_cost(u, e.sample, laplacian, hp, lasso);
    grad += sample_cost_gradient(u, e.sample, best.coefficients, best.outliers,
                                 laplacian, hp);
  }
  return grad / static_cast<double>(history.steps());
}

GradientCheck gradient_check(const Eigen::MatrixXd& u,
                             const StreamSample& sample,
                             const GraphLaplacian& laplacian,
                             const Hyperparameters& hp) {
  const InnerMinimum at_u = minimize_sample_cost(u, sample, laplacian, hp);
  GradientCheck out;
  out.analytic = sample_cost_gradient(u, sample, at_u.coefficients,
                                      at_u.outliers, laplacian, hp);
  const double h = 1e-5 * (1.0 + u.norm());
  out.finite_difference.resize(u.rows(), u.cols());
  Eigen::MatrixXd probe = u;
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
      probe(i, j) = u(i, j) + h;
      const double up = minimize_sample_cost(probe, sample, laplacian, hp).value;
      probe(i, j) = u(i, j) - h;
      const double down =
          minimize_sample_cost(probe, sample, laplacian, hp).value;
      probe(i, j) = u(i, j);
      out.finite_difference(i, j) = (up - down) / (2.0 * h);
    }
  }
  const double scale = out.analytic.cwiseAbs().maxCoeff();
  const double diff = (out.finite_difference - out.analytic).cwiseAbs().maxCoeff();
  if (diff == 0.0) {
    out.max_relative_deviation = 0.0;
  } else if (scale == 0.0) {
    out.max_relative_deviation = std::numeric_limits<double>::infinity();
  } else {
    out.max_relative_deviation = diff / scale;
  }
  return out;
}

double stationarity_residual(const AccumulatorSet& acc,
                             const GraphLaplacian& laplacian,
                             const Hyperparameters& hp,
                             const Eigen::MatrixXd& u) {
  const SubspaceSystemOperator op = acc.make_operator(laplacian, hp);
  const Eigen::MatrixXd b = acc.system_rhs(hp);
  return (op.apply(u) - b).norm() / (1.0 + b.norm());
}

double strong_convexity_margin(const AccumulatorSet& acc,
                               const GraphLaplacian& laplacian,
                               const Hyperparameters& hp, std::int64_t t) {
  if (t < 1) throw ValidationError("strong_convexity_margin: t must be >= 1");
  const SubspaceSystemOperator op = acc.make_operator(laplacian, hp);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
      op.materialize(), Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0) / static_cast<double>(t);
}

void write_diagnostics_csv(std::ostream& out,
                           std::span<const DiagnosticRow> rows) {
  out << "t,err_db,c_hat,c_true,grad_norm,stat_residual\n";
  for (const DiagnosticRow& row : rows) {
    out << row.t << "," << format_double(row.err_db) << ","
        << format_double(row.c_hat) << "," << format_double(row.c_true) << ","
        << format_double(row.grad_norm) << ","
        << format_double(row.stat_residual) << "\n";
  }
}

}  // namespace graphmc
