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

// Acceptance checks for the library as a whole. Prints one PASS/FAIL line
// per criterion and exits non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "graphmc/datagen.h"
#include "graphmc/diagnostics.h"
#include "graphmc/errors.h"
#include "graphmc/harness.h"
#include "graphmc/robust.h"
#include "graphmc/solvers.h"
#include "graphmc/tracker.h"
#include "test_util.h"

namespace graphmc {
namespace {

using testing::random_graph;
using testing::random_mask;
using testing::random_matrix;
using testing::random_vector;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  double time_limit_s;  // <= 0 means no limit
  std::function<Outcome()> run;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

AccumulatorSet random_accumulators(int m, int r, int t, double observed, Rng& rng) {
  AccumulatorSet acc = AccumulatorSet::zeros(m, r);
  for (int k = 0; k < t; ++k) {
    const StreamSample s = StreamSample::make(random_vector(m, rng),
                                              random_mask(m, observed, rng));
    update_accumulators(acc, s, random_vector(r, rng), s.values);
  }
  return acc;
}

Outcome cg_matches_dense() {
  Rng rng(101);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const int m = 1 + static_cast<int>(rng.uniform_int(0, 7));
    const int r = 1 + static_cast<int>(rng.uniform_int(0, 2));
    const int t = 1 + static_cast<int>(rng.uniform_int(0, 4));
    const GraphLaplacian l = build_laplacian(random_graph(m, 0.5, rng));
    const AccumulatorSet acc = random_accumulators(m, r, t, 0.7, rng);
    const Hyperparameters hp{0.01 + rng.uniform01(), 5.0 * rng.uniform01(), 0.0, r};
    const SubspaceSystemOperator op = acc.make_operator(l, hp);
    const Eigen::MatrixXd rhs = random_matrix(m, r, rng);
    // Oracle: factor the materialized mr x mr matrix directly.
    const Eigen::VectorXd vec_rhs = Eigen::Map<const Eigen::VectorXd>(rhs.data(), rhs.size());
    const Eigen::VectorXd dense = op.materialize().llt().solve(vec_rhs);
    SolverConfig cfg;
    cfg.method = SolverMethod::kConjugateGradient;
    // The residual stop must sit below the solution tolerance; the
    // residual-to-error ratio is bounded by the condition number.
    cfg.cg_rel_tolerance = 1e-12;
    const Eigen::MatrixXd u = solve_subspace(op, rhs, cfg).u;
    const Eigen::VectorXd vu = Eigen::Map<const Eigen::VectorXd>(u.data(), u.size());
    worst = std::max(worst, (vu - dense).norm() / dense.norm());
  }
  return {worst <= 1e-8, "50 instances, max rel err " + fmt(worst) + " (tol 1e-8)"};
}

Outcome sylvester_matches_kronecker() {
  Rng rng(102);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const int m = 2 + static_cast<int>(rng.uniform_int(0, 10));
    const int r = 1 + static_cast<int>(rng.uniform_int(0, 3));
    const GraphLaplacian l = build_laplacian(random_graph(m, 0.4, rng));
    const Hyperparameters hp{0.01 + rng.uniform01(), 5.0 * rng.uniform01(), 0.0, r};
    // Fully observed stream through the tracker's own accumulator update.
    AccumulatorSet acc = AccumulatorSet::zeros(m, r);
    for (int t = 0; t < 1 + k; ++t) {
      const StreamSample s = StreamSample::fully_observed(random_vector(m, rng));
      update_accumulators(acc, s, random_vector(r, rng), s.values);
    }
    SolverConfig cfg;
    cfg.method = SolverMethod::kDenseDirect;
    const Eigen::MatrixXd kron = solve_subspace(acc.make_operator(l, hp), acc.rhs, cfg).u;
    const Eigen::MatrixXd syl = solve_sylvester(l, hp.lambda1, hp.lambda2, acc.gram, acc.rhs);
    worst = std::max(worst, (syl - kron).norm() / kron.norm());
  }
  return {worst <= 1e-8, "20 streams, max rel err " + fmt(worst) + " (tol 1e-8)"};
}

Outcome decoupling_reduction() {
  Rng rng(103);
  const int m = 15, r = 3, n = 100;
  const GraphLaplacian l = build_laplacian(random_graph(m, 0.4, rng));
  const Hyperparameters hp{0.1, 0.0, 0.0, r};
  const SubspaceState init = SubspaceState::random_init(m, r, 103);
  const auto model = testing::planted_model(m, r, n, rng);
  double worst = 0.0;
  for (auto method : {SolverMethod::kDenseDirect, SolverMethod::kConjugateGradient}) {
    SolverConfig cfg;
    cfg.method = method;
    OnlineTracker tracker(l, hp, cfg, init);
    testing::RowDecoupledTracker oracle(init.u, hp.lambda1);
    Rng stream(104);
    for (int t = 0; t < n; ++t) {
      const Eigen::VectorXd x = model.columns.col(t) + 0.1 * random_vector(m, stream);
      const Mask mask = random_mask(m, 0.75, stream);
      const StreamSample s = StreamSample::make(x, mask);
      const Eigen::VectorXd got = tracker.step(s).reconstruction;
      const Eigen::VectorXd want = oracle.step(s.values, mask);
      worst = std::max(worst, (got - want).norm() / (1.0 + want.norm()));
      worst = std::max(worst, (tracker.state().u - oracle.u()).norm() /
                                  (1.0 + oracle.u().norm()));
    }
  }
  return {worst <= 1e-8,
          "100 steps x {dense, cg}, max rel deviation " + fmt(worst) + " (tol 1e-8)"};
}

Outcome optimality_certificates() {
  ContinuousConfig dc;
  dc.rows = 30;
  dc.cols = 500;
  dc.rank = 3;
  dc.seed = 105;
  const ContinuousData data = gen_continuous(dc);
  const GraphLaplacian l = build_laplacian(data.graph);
  const Hyperparameters hp{0.1, 1.0, 1.0, dc.rank};
  const std::vector<Mask> masks = gen_mask_stream(dc.rows, dc.cols, {0.2, 105});
  RobustTracker tracker(l, hp, {}, SubspaceState::random_init(dc.rows, dc.rank, 105));
  double min_eig = std::numeric_limits<double>::infinity();
  double worst_kkt = 0.0;
  double worst_stat = 0.0;
  for (int t = 0; t < dc.cols; ++t) {
    const StreamSample s = StreamSample::make(data.observed.col(t), masks[t]);
    const CoefficientSystem sys = coefficient_system(tracker.state().u, s, l, hp);
    min_eig = std::min(min_eig, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(
                                    sys.a, Eigen::EigenvaluesOnly)
                                    .eigenvalues()(0));
    const RobustStepResult res = tracker.step(s);
    worst_kkt = std::max(worst_kkt, res.lasso.kkt_violation);
    worst_stat = std::max(worst_stat, stationarity_residual(tracker.accumulators(), l, hp,
                                                            tracker.state().u));
  }
  const bool pass =
      min_eig >= hp.lambda1 - 1e-12 && worst_kkt <= 1e-8 && worst_stat <= 1e-6;
  return {pass, "500 steps, min eig(A_t) - lambda1 = " + fmt(min_eig - hp.lambda1) +
                    ", max KKT " + fmt(worst_kkt) + ", max stationarity " +
                    fmt(worst_stat)};
}

Outcome gradient_checks() {
  Rng rng(106);
  double worst = 0.0;
  for (int k = 0; k < 30; ++k) {
    const int m = 3 + static_cast<int>(rng.uniform_int(0, 7));
    const int r = 1 + static_cast<int>(rng.uniform_int(0, 2));
    const GraphLaplacian l = build_laplacian(random_graph(m, 0.5, rng));
    const double lambda3 = k % 2 == 0 ? 0.0 : 0.5 + rng.uniform01();
    const Hyperparameters hp{0.05 + rng.uniform01(), 3.0 * rng.uniform01(), lambda3, r};
    Eigen::VectorXd x = random_vector(m, rng);
    x(rng.uniform_int(0, m - 1)) += 8.0;
    const StreamSample s = StreamSample::make(x, random_mask(m, 0.8, rng));
    const GradientCheck g = gradient_check(random_matrix(m, r, rng), s, l, hp);
    worst = std::max(worst, g.max_relative_deviation);
  }
  return {worst <= 1e-4, "30 instances, max rel deviation " + fmt(worst) + " (tol 1e-4)"};
}

Outcome surrogate_overestimates() {
  Rng rng(107);
  const int m = 8, r = 2, n = 200;
  const GraphLaplacian l = build_laplacian(random_graph(m, 0.5, rng));
  const Hyperparameters hp{0.1, 1.0, 0.5, r};
  const auto model = testing::planted_model(m, r, n, rng);
  RobustTracker tracker(l, hp, {}, SubspaceState::random_init(m, r, 107));
  StreamHistory history(true, tracker.accumulators().anchor);
  double worst = std::numeric_limits<double>::infinity();
  bool pass = true;
  for (int t = 0; t < n; ++t) {
    Eigen::VectorXd x = model.columns.col(t) + 0.05 * random_vector(m, rng);
    if (rng.bernoulli(0.2)) x(rng.uniform_int(0, m - 1)) += 20.0;
    const StreamSample s = StreamSample::make(x, random_mask(m, 0.8, rng));
    const RobustStepResult res = tracker.step(s);
    history.record(s, res.coefficients, res.outliers.to_dense());
    const CostSnapshot snap = surrogate_and_true_cost(history, tracker.state().u, l, hp);
    const double slack = snap.gap / (1.0 + std::abs(snap.c_true));
    worst = std::min(worst, slack);
    if (snap.gap < -1e-8 * (1.0 + std::abs(snap.c_true))) pass = false;
  }
  return {pass, "200 steps, min (C_hat - C)/(1 + |C|) = " + fmt(worst) + " (floor -1e-8)"};
}

ExperimentConfig netflix_protocol(double lambda2) {
  ExperimentConfig cfg;
  cfg.dataset = DatasetKind::kNetflix;
  cfg.netflix.noise_prob = 0.3;
  cfg.netflix.noise_level = 1;
  cfg.netflix.users = 100;
  cfg.netflix.movies = 200;
  cfg.missing = 0.2;
  cfg.hp = {1e-4, lambda2, 0.0, 10};
  cfg.seed = 1;
  return cfg;
}

Outcome netflix_ordering() {
  const Dataset data = build_dataset(netflix_protocol(0.0));
  const double e0 = run_experiment(netflix_protocol(0.0), data).final_err_db();
  const double e1 = run_experiment(netflix_protocol(1.0), data).final_err_db();
  const double e10 = run_experiment(netflix_protocol(10.0), data).final_err_db();
  const bool pass = e1 <= e0 - 1.0 && e10 <= e0 - 1.0 && e10 <= e1 + 0.5;
  return {pass, "final err_db: lambda2=0 " + fmt(e0) + ", lambda2=1 " + fmt(e1) +
                    ", lambda2=10 " + fmt(e10)};
}

Outcome continuous_ordering() {
  ExperimentConfig cfg;
  cfg.dataset = DatasetKind::kContinuous;
  cfg.continuous.noise_sigma = 0.2;
  cfg.continuous.outlier_density = 0.01;
  cfg.continuous.outlier_magnitude_factor = 10.0;
  cfg.missing = 0.2;
  cfg.hp = {0.1, 1.0, 0.0, cfg.continuous.rank};
  cfg.seed = 1;
  const Dataset data = build_dataset(cfg);
  cfg.tracker = TrackerKind::kOnline;
  const double plain = run_experiment(cfg, data).final_err_db();
  cfg.tracker = TrackerKind::kRobust;
  cfg.hp.lambda3 = 1.0;
  const double robust = run_experiment(cfg, data).final_err_db();
  return {robust <= plain - 3.0,
          "final err_db: robust " + fmt(robust) + ", non-robust " + fmt(plain)};
}

Outcome noiseless_identifiability() {
  Rng rng(109);
  const int m = 20, r = 3, n = 500;
  const auto model = testing::planted_model(m, r, n, rng);
  OnlineTracker tracker(build_laplacian(WeightedGraph::empty(m)), {1e-3, 0.0, 0.0, r}, {},
                        SubspaceState::random_init(m, r, 109));
  int first = -1;
  double last = 0.0;
  for (int t = 0; t < n; ++t) {
    const Eigen::VectorXd x = model.columns.col(t);
    last = (tracker.step(StreamSample::fully_observed(x)).reconstruction - x).norm() /
           x.norm();
    if (first < 0 && last < 1e-3) first = t + 1;
  }
  return {first > 0, "first step below 1e-3: " + (first > 0 ? std::to_string(first) : "none") +
                         ", error at step 500 " + fmt(last)};
}

Outcome run_determinism() {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "graphmc_acceptance_determinism";
  std::filesystem::remove_all(dir);
  ExperimentConfig cfg;
  cfg.dataset = DatasetKind::kContinuous;
  cfg.tracker = TrackerKind::kRobust;
  cfg.hp = {0.1, 1.0, 1.0, 5};
  cfg.seed = 110;
  cfg.diagnostics = true;
  cfg.diagnostics_every = 50;
  const auto read = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  };
  cfg.out = (dir / "a.csv").string();
  cmd_run(cfg);
  cfg.out = (dir / "b.csv").string();
  cmd_run(cfg);
  const std::string a = read(dir / "a.csv");
  const std::string b = read(dir / "b.csv");
  const bool same = !a.empty() && a == b &&
                    read(dir / "a.diagnostics.csv") == read(dir / "b.diagnostics.csv");
  std::filesystem::remove_all(dir);
  return {same, std::to_string(a.size()) + " bytes, results and diagnostics " +
                    (same ? "identical" : "differ")};
}

}  // namespace
}  // namespace graphmc

int main() {
  using graphmc::Criterion;
  const std::vector<Criterion> criteria{
      {"AC1 structured solve: CG vs dense direct", 10.0, graphmc::cg_matches_dense},
      {"AC2 Sylvester vs Kronecker solve", 10.0, graphmc::sylvester_matches_kronecker},
      {"AC3 graph-free decoupling reduction", 0.0, graphmc::decoupling_reduction},
      {"AC4 per-step optimality certificates", 0.0, graphmc::optimality_certificates},
      {"AC5 cost gradient vs finite differences", 0.0, graphmc::gradient_checks},
      {"AC6 surrogate overestimates true cost", 0.0, graphmc::surrogate_overestimates},
      {"AC7 netflix ordering over lambda2", 120.0, graphmc::netflix_ordering},
      {"AC8 robust vs non-robust on outliers", 120.0, graphmc::continuous_ordering},
      {"AC9 noiseless planted subspace recovery", 30.0, graphmc::noiseless_identifiability},
      {"AC10 cmd_run byte determinism", 0.0, graphmc::run_determinism},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    graphmc::Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool pass = outcome.pass;
    std::string detail = outcome.detail;
    if (c.time_limit_s > 0.0 && secs >= c.time_limit_s) {
      pass = false;
      detail += "; over time limit " + graphmc::fmt(c.time_limit_s) + " s";
    }
    if (!pass) ++failures;
    std::printf("%s  %-42s %s [%.2f s]\n", pass ? "PASS" : "FAIL", c.name.c_str(),
                detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
