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

#ifndef GRAPHMC_HARNESS_H_
#define GRAPHMC_HARNESS_H_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "graphmc/datagen.h"
#include "graphmc/diagnostics.h"
#include "graphmc/graph.h"
#include "graphmc/robust.h"
#include "graphmc/solvers.h"
#include "graphmc/tracker.h"

namespace graphmc {

enum class DatasetKind { kNetflix, kContinuous, kTrafficFile };
enum class TrackerKind { kOnline, kRobust, kBaselineNoGraph };

std::string to_string(DatasetKind kind);
std::string to_string(TrackerKind kind);
DatasetKind parse_dataset_kind(const std::string& name);
TrackerKind parse_tracker_kind(const std::string& name);

// Everything needed to reproduce a run. The top-level seed drives every
// random stream (data, noise, outliers, masks, initial subspace); the
// per-dataset seed fields are overwritten from it by resolved().
struct ExperimentConfig {
  DatasetKind dataset = DatasetKind::kNetflix;
  NetflixConfig netflix;
  ContinuousConfig continuous;
  // Directory written by cmd_gen; when set, the dataset is loaded from it
  // instead of being generated.
  std::string data_dir;
  // traffic-file inputs. Graph defaults to the CSV with a .graph extension;
  // truth defaults to the stream itself.
  std::string traffic_csv;
  std::string traffic_graph;
  std::string traffic_truth;

  TrackerKind tracker = TrackerKind::kOnline;
  Hyperparameters hp{0.1, 0.0, 0.0, 10};
  double missing = 0.2;
  SolverConfig solver;
  TrackerOptions options;
  LassoSettings lasso;
  std::uint64_t seed = 1;
  int max_steps = 0;  // 0 streams every column

  bool diagnostics = false;
  int diagnostics_every = 1;

  std::string out;

  // Grid for cmd_sweep; an empty list keeps the value from hp.
  std::vector<double> sweep_lambda1;
  std::vector<double> sweep_lambda2;
  std::vector<double> sweep_lambda3;
  std::uint64_t holdout_seed = 0;  // 0 selects seed + 1
  int jobs = 1;

  // Copy with dataset seeds synchronized to `seed` and baseline-nograph's
  // lambda2 forced to 0.
  ExperimentConfig resolved() const;
  // Throws ConfigError on any invalid field.
  void validate() const;

  bool operator==(const ExperimentConfig& other) const;
};

std::string config_to_json(const ExperimentConfig& cfg);
// Missing keys keep their defaults; unknown keys are a ConfigError.
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);

struct Dataset {
  WeightedGraph graph;
  Eigen::MatrixXd observed;  // m x n stream, before masking
  Eigen::MatrixXd truth;     // m x n reference for err(t)
  std::int64_t planted_outliers = 0;
  std::vector<int> column_permutation;
};

Dataset build_dataset(const ExperimentConfig& cfg);

struct RunResult {
  std::vector<double> relative_error;
  std::vector<double> err_db;
  std::vector<DiagnosticRow> diagnostics;
  Eigen::MatrixXd final_subspace;
  std::vector<Eigen::VectorXd> coefficients;
  int total_cg_iterations = 0;
  double wall_seconds = 0.0;

  double final_err_db() const;
};

// Streams the dataset through the configured tracker in memory. Solver
// failures are rethrown as ConvergenceError naming the step.
RunResult run_experiment(const ExperimentConfig& cfg, const Dataset& data);

struct GenSummary {
  std::string directory;
  std::int64_t planted_outliers = 0;
};

// Writes observed.csv, truth.csv, graph.txt and manifest.json into cfg.out.
GenSummary cmd_gen(const ExperimentConfig& cfg);

// Writes the per-step results CSV to cfg.out (header t,rel_error,err_db),
// a run manifest next to it (<stem>.manifest.json) and, with diagnostics
// on, <stem>.diagnostics.csv.
RunResult cmd_run(const ExperimentConfig& cfg);

std::string manifest_path_for(const std::string& results_path);
std::string diagnostics_path_for(const std::string& results_path);

struct CompareRow {
  std::string path;
  double final_err_db = 0.0;
  double delta_db = 0.0;          // final_err_db minus the best run's
  std::int64_t steps_to_within_1db = 0;
  double wall_seconds = 0.0;      // from the run manifest, NaN if absent
};

// Rows sorted by final err_db (best first, ties by path). Throws
// ValidationError when the files disagree on step count.
std::vector<CompareRow> cmd_compare(const std::vector<std::string>& paths);
std::string format_compare_table(const std::vector<CompareRow>& rows);
std::string format_compare_csv(const std::vector<CompareRow>& rows);

struct SweepRow {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda3 = 0.0;
  double final_err_db = 0.0;
};

// Evaluates every grid point on the held-out seed and returns rows sorted
// by final err_db (best first). Writes them as CSV to cfg.out when set.
std::vector<SweepRow> cmd_sweep(const ExperimentConfig& cfg);

// Step at which a series enters, and then stays within, 1 dB of its final
// value (1-based).
std::int64_t steps_to_within_1db(const std::vector<double>& err_db);

}  // namespace graphmc

#endif  // GRAPHMC_HARNESS_H_
