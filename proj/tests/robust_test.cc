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

#include <cmath>

#include <gtest/gtest.h>

#include "graphmc/datagen.h"
#include "graphmc/errors.h"
#include "test_util.h"

namespace graphmc {
namespace {

using testing::random_graph;
using testing::random_matrix;
using testing::random_sample;
using testing::random_vector;

// Accelerated proximal gradient (FISTA) on ||C (x - s)||^2 + lambda ||s||_1,
// run far past the point where iterates stop moving.
Eigen::VectorXd fista_reference(const Eigen::MatrixXd& c, const Eigen::VectorXd& x,
                                double lambda) {
  const Eigen::MatrixXd h = c.transpose() * c;
  const double lip = 2.0 * Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h)
                               .eigenvalues()
                               .maxCoeff();
  const double step = 1.0 / lip;
  Eigen::VectorXd s = Eigen::VectorXd::Zero(x.size());
  Eigen::VectorXd y = s;
  double tk = 1.0;
  for (int it = 0; it < 200000; ++it) {
    const Eigen::VectorXd grad = -2.0 * h * (x - y);
    Eigen::VectorXd z = y - step * grad;
    for (Eigen::Index j = 0; j < z.size(); ++j) {
      const double a = std::abs(z(j)) - step * lambda;
      z(j) = a > 0.0 ? std::copysign(a, z(j)) : 0.0;
    }
    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
    y = z + ((tk - 1.0) / tn) * (z - s);
    const double moved = (z - s).norm();
    s = z;
    tk = tn;
    if (moved < 1e-15 && it > 1000) break;
  }
  return s;
}

// Value of the smooth part after eliminating r, computed from the normal
// equations of r directly rather than through C.
double reduced_objective(const Eigen::MatrixXd& u, const StreamSample& sample,
                         const Eigen::MatrixXd& lap, const Hyperparameters& hp,
                         const Eigen::VectorXd& s) {
  const Eigen::VectorXd w = sample.mask_diagonal();
  const Eigen::VectorXd y = w.cwiseProduct(sample.values - s);
  const Eigen::MatrixXd a = u.transpose() * w.asDiagonal() * u +
                            hp.lambda2 * u.transpose() * lap * u +
                            hp.lambda1 * Eigen::MatrixXd::Identity(u.cols(), u.cols());
  const Eigen::VectorXd r = a.ldlt().solve(u.transpose() * y);
  const Eigen::VectorXd ur = u * r;
  return (y - w.cwiseProduct(ur)).squaredNorm() + hp.lambda1 * r.squaredNorm() +
         hp.lambda2 * ur.dot(lap * ur);
}

TEST(OutlierVector, SparseAndDenseStorage) {
  Eigen::VectorXd s = Eigen::VectorXd::Zero(8);
  s(2) = 1.5;
  s(6) = -2.0;
  const OutlierVector sparse = OutlierVector::from_dense(s);
  EXPECT_FALSE(sparse.stored_dense());
  EXPECT_EQ(sparse.nonzeros(), 2);
  EXPECT_EQ(sparse.support(), (std::vector<int>{2, 6}));
  EXPECT_EQ(sparse.to_dense(), s);
  s(0) = s(1) = 1.0;
  s(3) = 4.0;
  const OutlierVector dense = OutlierVector::from_dense(s);
  EXPECT_TRUE(dense.stored_dense());
  EXPECT_EQ(dense.to_dense(), s);
  EXPECT_EQ(dense.support(), (std::vector<int>{0, 1, 2, 3, 6}));
  EXPECT_EQ(OutlierVector().nonzeros(), 0);
}

TEST(AssembleLasso, ZeroGraphWeightLeavesThirdBlockEmpty) {
  Rng rng(41);
  const int m = 5, r = 2;
  const GraphLaplacian l = build_laplacian(random_graph(m, 0.8, rng));
  const LassoProblem prob = assemble_lasso(random_matrix(m, r, rng),
                                           random_sample(m, 0.7, rng), l,
                                           {0.3, 0.0, 1.0, r});
  EXPECT_EQ(prob.design.rows(), 2 * m + r);
  EXPECT_EQ(prob.design.bottomRows(m).norm(), 0.0);
}

TEST(AssembleLasso, ZeroSubspaceGivesIdentityBlock) {
  Rng rng(42);
  const int m = 4, r = 2;
  const GraphLaplacian l = build_laplacian(random_graph(m, 0.8, rng));
  const LassoProblem prob =
      assemble_lasso(Eigen::MatrixXd::Zero(m, r),
                     StreamSample::fully_observed(random_vector(m, rng)), l,
                     {0.3, 2.0, 1.0, r});
  EXPECT_EQ(prob.projection.norm(), 0.0);
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(2 * m + r, m);
  expected.topRows(m).setIdentity();
  EXPECT_EQ(prob.design, expected);
}

TEST(AssembleLasso, GramIsHessianOfReducedObjective) {
  Rng rng(43);
  const int m = 7, r = 2;
  const GraphLaplacian l = build_laplacian(random_graph(m, 0.5, rng));
  const Hyperparameters hp{0.4, 1.3, 0.5, r};
  const Eigen::MatrixXd u = random_matrix(m, r, rng);
  const StreamSample sample = random_sample(m, 0.7, rng);
  const LassoProblem prob = assemble_lasso(u, sample, l, hp);
  // The reduced objective is quadratic in s, so second differences with a
  // unit step are exact up to rounding.
  const auto f = [&](const Eigen::VectorXd& s) {
    return reduced_objective(u, sample, l.matrix(), hp, s);
  };
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(m);
  Eigen::MatrixXd hess(m, m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      const Eigen::VectorXd ea = Eigen::VectorXd::Unit(m, a);
      const Eigen::VectorXd eb = Eigen::VectorXd::Unit(m, b);
      hess(a, b) = f(ea + eb) - f(ea) - f(eb) + f(zero);
    }
  }
  EXPECT_LE((2.0 * prob.gram - hess).norm(), 1e-10 * (1.0 + hess.norm()));
  // The reduced objective also equals ||C (x - s)||^2 itself.
  const Eigen::VectorXd s = random_vector(m, rng);
  EXPECT_NEAR(f(s), (prob.design * (prob.target - s)).squaredNorm(), 1e-10 * (1 + f(s)));
}

TEST(AssembleLasso, UnobservedColumnsAreZero) {
  Rng rng(44);
  const int m = 6, r = 2;
  const GraphLaplacian l = build_laplacian(random_graph(m, 0.6, rng));
  const StreamSample sample = random_sample(m, 0.5, rng);
  const LassoProblem prob =
      assemble_lasso(random_matrix(m, r, rng), sample, l, {0.2, 1.0, 0.3, r});
  for (int j = 0; j < m; ++j) {
    if (!sample.observed(j)) EXPECT_EQ(prob.design.col(j).norm(), 0.0);
  }
}

TEST(SolveLasso, LargePenaltyGivesZero) {
  Rng rng(45);
  const int m = 6, r = 2;
  const GraphLaplacian l = build_laplacian(random_graph(m, 0.6, rng));
  LassoProblem prob = assemble_lasso(random_matrix(m, r, rng), random_sample(m, 0.8, rng),
                                     l, {0.2, 1.0, 0.0, r});
  prob.penalty = 2.0 * (prob.gram * prob.target).lpNorm<Eigen::Infinity>();
  const LassoSolution sol = solve_lasso(prob);
  EXPECT_EQ(sol.s.norm(), 0.0);
  EXPECT_EQ(sol.sweeps, 0);
  EXPECT_TRUE(std::isinf(sol.support_curvature));
}

TEST(SolveLasso, IdentityDesignIsSoftThreshold) {
  LassoProblem prob;
  prob.design = Eigen::MatrixXd::Identity(2, 2);
  prob.gram = Eigen::MatrixXd::Identity(2, 2);
  prob.target = Eigen::Vector2d(3.0, -0.1);
  prob.penalty = 2.0;
  const LassoSolution sol = solve_lasso(prob);
  EXPECT_NEAR(sol.s(0), 2.0, 1e-15);
  EXPECT_EQ(sol.s(1), 0.0);
  EXPECT_LE(sol.kkt_violation, 1e-8);
  EXPECT_DOUBLE_EQ(sol.support_curvature, 1.0);
}

TEST(SolveLasso, MatchesProximalGradientReference) {
  Rng rng(46);
  const int m = 8, r = 2;
  const GraphLaplacian l = build_laplacian(random_graph(m, 0.5, rng));
  Eigen::VectorXd x = random_vector(m, rng);
  x(1) += 8.0;
  x(5) -= 6.0;
  const StreamSample sample = StreamSample::make(x, Mask::Constant(m, true));
  LassoProblem prob = assemble_lasso(random_matrix(m, r, rng), sample, l,
                                     {0.3, 1.0, 0.5, r});
  prob.record_objective = true;
  const LassoSolution sol = solve_lasso(prob);
  const Eigen::VectorXd ref = fista_reference(prob.design, prob.target, prob.penalty);
  ASSERT_GT(sol.support_curvature, 1e-6);
  EXPECT_LE((sol.s - ref).norm(), 1e-8 * (1.0 + ref.norm()));
  EXPECT_LE(lasso_kkt_violation(prob, sol.s), 1e-8);
  EXPECT_GT(sol.s.cwiseAbs().maxCoeff(), 0.0);
  for (std::size_t k = 1; k < sol.objective_trace.size(); ++k) {
    EXPECT_LE(sol.objective_trace[k], sol.objective_trace[k - 1] * (1.0 + 1e-15));
  }
}

TEST(SolveLasso, ObjectiveNeverIncreasesOnRandomInstances) {
  Rng rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 4 + static_cast<int>(rng.uniform_int(0, 12));
    const int r = 1 + static_cast<int>(rng.uniform_int(0, 2));
    const GraphLaplacian l = build_laplacian(random_graph(m, 0.4, rng));
    Eigen::VectorXd x = random_vector(m, rng);
    x(0) += 10.0;
    LassoProblem prob =
        assemble_lasso(random_matrix(m, r, rng),
                       StreamSample::make(x, testing::random_mask(m, 0.8, rng)), l,
                       {0.1, 2.0 * rng.uniform01(), 0.2 + rng.uniform01(), r});
    prob.record_objective = true;
    const LassoSolution sol = solve_lasso(prob);
    EXPECT_LE(sol.kkt_violation, 1e-8);
    for (std::size_t k = 1; k < sol.objective_trace.size(); ++k) {
      ASSERT_LE(sol.objective_trace[k],
                sol.objective_trace[k - 1] + 1e-12 * (1.0 + sol.objective_trace[k - 1]));
    }
    for (int j = 0; j < m; ++j) {
      if (prob.design.col(j).norm() == 0.0) EXPECT_EQ(sol.s(j), 0.0);
    }
  }
}

TEST(SolveLasso, SweepCapRaisesConvergenceError) {
  Rng rng(48);
  const int m = 10, r = 3;
  const GraphLaplacian l = build_laplacian(random_graph(m, 0.6, rng));
  Eigen::VectorXd x = 5.0 * random_vector(m, rng);
  LassoProblem prob = assemble_lasso(random_matrix(m, r, rng),
                                     StreamSample::fully_observed(x), l,
                                     {0.01, 5.0, 0.01, r});
  prob.max_iters = 1;
  prob.tolerance = 1e-15;
  EXPECT_THROW(solve_lasso(prob), ConvergenceError);
}

TEST(RobustCoefficients, ZeroOutliersMatchPlain) {
  Rng rng(49);
  const int m = 6, r = 2;
  const GraphLaplacian l = build_laplacian(random_graph(m, 0.6, rng));
  const Hyperparameters hp{0.2, 1.0, 0.5, r};
  const Eigen::MatrixXd u = random_matrix(m, r, rng);
  const StreamSample sample = random_sample(m, 0.7, rng);
  EXPECT_EQ(compute_robust_coefficients(u, sample, l, hp, Eigen::VectorXd::Zero(m)),
            compute_coefficients(u, sample, l, hp));
}

TEST(RobustCoefficients, EverythingOutlierGivesZero) {
  Rng rng(50);
  const int m = 6, r = 2;
  const GraphLaplacian l = build_laplacian(random_graph(m, 0.6, rng));
  const StreamSample sample = random_sample(m, 0.7, rng);
  const Eigen::VectorXd r_out = compute_robust_coefficients(
      random_matrix(m, r, rng), sample, l, {0.2, 1.0, 0.5, r}, sample.values);
  EXPECT_EQ(r_out.norm(), 0.0);
}

TEST(RobustCoefficients, StationaryInCoefficients) {
  Rng rng(51);
  const int m = 8, r = 3;
  const GraphLaplacian l = build_laplacian(random_graph(m, 0.5, rng));
  const Hyperparameters hp{0.3, 0.7, 0.5, r};
  const Eigen::MatrixXd u = random_matrix(m, r, rng);
  const StreamSample sample = random_sample(m, 0.8, rng);
  const Eigen::VectorXd s = random_vector(m, rng);
  const Eigen::VectorXd c = compute_robust_coefficients(u, sample, l, hp, s);
  const Eigen::VectorXd w = sample.mask_diagonal();
  const Eigen::VectorXd grad = -u.transpose() * w.cwiseProduct(sample.values - s - u * c) +
                               hp.lambda1 * c +
                               hp.lambda2 * u.transpose() * (l.matrix() * (u * c));
  EXPECT_LE(grad.norm(), 1e-10);
}

TEST(RobustTracker, HugePenaltyReproducesOnlineTracker) {
  Rng rng(52);
  const int m = 8, r = 2;
  const GraphLaplacian l = build_laplacian(random_graph(m, 0.5, rng));
  const SubspaceState init = SubspaceState::random_init(m, r, 3);
  OnlineTracker plain(l, {0.1, 1.0, 0.0, r}, {}, init);
  RobustTracker robust(l, {0.1, 1.0, 1e12, r}, {}, init);
  for (int t = 0; t < 50; ++t) {
    const StreamSample s = random_sample(m, 0.8, rng);
    const StepResult a = plain.step(s);
    const RobustStepResult b = robust.step(s);
    ASSERT_EQ(b.outliers.nonzeros(), 0);
    ASSERT_EQ(a.reconstruction, b.reconstruction);
  }
  EXPECT_EQ(plain.state().u, robust.state().u);
}

TEST(RobustTracker, ZeroPenaltySwitchesOutliersOff) {
  Rng rng(53);
  const int m = 6, r = 2;
  const GraphLaplacian l = build_laplacian(random_graph(m, 0.5, rng));
  const SubspaceState init = SubspaceState::random_init(m, r, 4);
  OnlineTracker plain(l, {0.1, 1.0, 0.0, r}, {}, init);
  RobustTracker robust(l, {0.1, 1.0, 0.0, r}, {}, init);
  for (int t = 0; t < 50; ++t) {
    const StreamSample s = random_sample(m, 0.8, rng);
    ASSERT_EQ(plain.step(s).reconstruction, robust.step(s).reconstruction);
  }
}

TEST(RobustStep, DecomposesIntoSubOperations) {
  Rng rng(54);
  const int m = 7, r = 2;
  const GraphLaplacian l = build_laplacian(random_graph(m, 0.5, rng));
  const Hyperparameters hp{0.2, 1.0, 0.4, r};
  SubspaceState state = SubspaceState::random_init(m, r, 5);
  AccumulatorSet acc = AccumulatorSet::zeros(m, r);
  Eigen::VectorXd x = random_vector(m, rng);
  x(2) += 9.0;
  const StreamSample sample = StreamSample::fully_observed(x);

  const Eigen::MatrixXd u0 = state.u;
  const Eigen::VectorXd s = solve_lasso(assemble_lasso(u0, sample, l, hp)).s;
  const Eigen::VectorXd c = compute_robust_coefficients(u0, sample, l, hp, s);
  AccumulatorSet manual = AccumulatorSet::zeros(m, r);
  update_accumulators(manual, sample, c, x - s);
  const Eigen::MatrixXd u1 = update_subspace(manual, l, hp, {}, u0).u;

  const RobustStepResult res = robust_step(state, acc, sample, l, hp, {});
  EXPECT_EQ(res.outliers.to_dense(), s);
  EXPECT_EQ(res.coefficients, c);
  EXPECT_EQ(res.clean_values, x - s);
  EXPECT_EQ(acc.rhs, manual.rhs);
  EXPECT_EQ(state.u, u1);
}

TEST(RobustTracker, RecoversPlantedOutlierSupport) {
  ContinuousConfig cfg;
  cfg.rows = 20;
  cfg.cols = 400;
  cfg.rank = 3;
  cfg.noise_sigma = 0.0;
  cfg.seed = 17;
  const ContinuousData data = gen_continuous(cfg);
  const int m = cfg.rows;
  RobustTracker tracker(build_laplacian(data.graph), {0.01, 0.1, 1.0, cfg.rank}, {},
                        SubspaceState::random_init(m, cfg.rank, 17));
  const int burn_in = 100;
  int agree = 0;
  for (int t = 0; t < cfg.cols; ++t) {
    const RobustStepResult res =
        tracker.step(StreamSample::fully_observed(data.observed.col(t)));
    if (t < burn_in) continue;
    std::vector<int> planted;
    for (int i = 0; i < m; ++i) {
      if (data.outliers(i, t) != 0.0) planted.push_back(i);
    }
    if (res.outliers.support() == planted) ++agree;
  }
  EXPECT_GE(agree, static_cast<int>(std::ceil(0.9 * (cfg.cols - burn_in))));
}

}  // namespace
}  // namespace graphmc
