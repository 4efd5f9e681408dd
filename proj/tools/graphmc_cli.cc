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

// Command-line driver for the graphmc trackers.
//
//   graphmc gen --dataset continuous --seed 3 --out data/
//   graphmc run --config exp.json --lambda2 10 --out results/l10.csv
//   graphmc compare results/*.csv
//   graphmc sweep --config exp.json --grid-lambda2 0,1,10 --jobs 2

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "graphmc/errors.h"
#include "graphmc/harness.h"
#include "graphmc/text_io.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Overrides {
  std::string config;
  std::optional<std::string> dataset;
  std::optional<std::string> data_dir;
  std::optional<std::string> traffic_csv;
  std::optional<std::string> traffic_graph;
  std::optional<std::uint64_t> seed;
  std::optional<double> lambda1;
  std::optional<double> lambda2;
  std::optional<double> lambda3;
  std::optional<int> rank;
  std::optional<double> missing;
  std::optional<std::string> tracker;
  std::optional<std::string> solver;
  std::optional<int> steps;
  bool diagnostics = false;
  std::optional<int> diagnostics_every;
  std::optional<std::string> out;
  std::vector<double> grid1, grid2, grid3;
  std::optional<std::uint64_t> holdout_seed;
  std::optional<int> jobs;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON experiment config");
  cmd->add_option("--dataset", o.dataset, "netflix, continuous or traffic-file");
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--out", o.out, "Output path");
}

void add_run_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--data-dir", o.data_dir, "Directory written by 'gen'");
  cmd->add_option("--traffic-csv", o.traffic_csv, "Link-load stream CSV");
  cmd->add_option("--traffic-graph", o.traffic_graph, "Link adjacency edge list");
  cmd->add_option("--lambda1", o.lambda1, "Ridge weight");
  cmd->add_option("--lambda2", o.lambda2, "Graph smoothness weight");
  cmd->add_option("--lambda3", o.lambda3, "Outlier sparsity weight");
  cmd->add_option("--rank", o.rank, "Subspace rank");
  cmd->add_option("--missing", o.missing, "Fraction of entries hidden");
  cmd->add_option("--tracker", o.tracker, "online, robust or baseline-nograph");
  cmd->add_option("--solver", o.solver, "auto, dense or cg");
  cmd->add_option("--steps", o.steps, "Stop after this many columns");
  cmd->add_flag("--diagnostics", o.diagnostics, "Record cost and gradient diagnostics");
  cmd->add_option("--diagnostics-every", o.diagnostics_every,
                  "Diagnostic row period");
}

graphmc::ExperimentConfig build_config(const Overrides& o) {
  graphmc::ExperimentConfig c;
  if (!o.config.empty()) c = graphmc::load_config(o.config);
  if (o.dataset) c.dataset = graphmc::parse_dataset_kind(*o.dataset);
  if (o.data_dir) c.data_dir = *o.data_dir;
  if (o.traffic_csv) {
    c.traffic_csv = *o.traffic_csv;
    if (!o.dataset) c.dataset = graphmc::DatasetKind::kTrafficFile;
  }
  if (o.traffic_graph) c.traffic_graph = *o.traffic_graph;
  if (o.seed) c.seed = *o.seed;
  if (o.lambda1) c.hp.lambda1 = *o.lambda1;
  if (o.lambda2) c.hp.lambda2 = *o.lambda2;
  if (o.lambda3) c.hp.lambda3 = *o.lambda3;
  if (o.rank) c.hp.rank = *o.rank;
  if (o.missing) c.missing = *o.missing;
  if (o.tracker) c.tracker = graphmc::parse_tracker_kind(*o.tracker);
  if (o.solver) c.solver.method = graphmc::parse_solver_method(*o.solver);
  if (o.steps) c.max_steps = *o.steps;
  if (o.diagnostics) c.diagnostics = true;
  if (o.diagnostics_every) c.diagnostics_every = *o.diagnostics_every;
  if (o.out) c.out = *o.out;
  if (!o.grid1.empty()) c.sweep_lambda1 = o.grid1;
  if (!o.grid2.empty()) c.sweep_lambda2 = o.grid2;
  if (!o.grid3.empty()) c.sweep_lambda3 = o.grid3;
  if (o.holdout_seed) c.holdout_seed = *o.holdout_seed;
  if (o.jobs) c.jobs = *o.jobs;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online graph-regularized matrix completion"};
  app.require_subcommand(1);
  Overrides o;

  CLI::App* gen = app.add_subcommand("gen", "Generate a synthetic dataset");
  add_common(gen, o);

  CLI::App* run = app.add_subcommand("run", "Stream a dataset through a tracker");
  add_common(run, o);
  add_run_flags(run, o);

  std::vector<std::string> inputs;
  bool as_csv = false;
  CLI::App* compare = app.add_subcommand("compare", "Summarize results CSVs");
  compare->add_option("results", inputs, "Results CSVs")->required();
  compare->add_flag("--csv", as_csv, "Emit CSV instead of a table");

  CLI::App* sweep =
      app.add_subcommand("sweep", "Grid search over the regularization weights");
  add_common(sweep, o);
  add_run_flags(sweep, o);
  sweep->add_option("--grid-lambda1", o.grid1, "Grid for lambda1")->delimiter(',');
  sweep->add_option("--grid-lambda2", o.grid2, "Grid for lambda2")->delimiter(',');
  sweep->add_option("--grid-lambda3", o.grid3, "Grid for lambda3")->delimiter(',');
  sweep->add_option("--holdout-seed", o.holdout_seed, "Seed of the held-out stream");
  sweep->add_option("--jobs", o.jobs, "Parallel runs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*compare) {
      const auto rows = graphmc::cmd_compare(inputs);
      std::cout << (as_csv ? graphmc::format_compare_csv(rows)
                           : graphmc::format_compare_table(rows));
      return 0;
    }
    const graphmc::ExperimentConfig cfg = build_config(o);
    if (*gen) {
      const auto summary = graphmc::cmd_gen(cfg);
      std::cout << "wrote dataset to " << summary.directory << "\n";
    } else if (*run) {
      const auto result = graphmc::cmd_run(cfg);
      std::cout << "steps " << result.err_db.size() << ", final err_db "
                << graphmc::format_double(result.final_err_db()) << ", "
                << result.wall_seconds << " s\n";
    } else if (*sweep) {
      const auto rows = graphmc::cmd_sweep(cfg);
      std::cout << "lambda1,lambda2,lambda3,final_err_db\n";
      for (const auto& row : rows) {
        std::cout << graphmc::format_double(row.lambda1) << ","
                  << graphmc::format_double(row.lambda2) << ","
                  << graphmc::format_double(row.lambda3) << ","
                  << graphmc::format_double(row.final_err_db) << "\n";
      }
    }
  } catch (const graphmc::ConvergenceError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const graphmc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return 0;
}
