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

#include "graphmc/harness.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "graphmc/errors.h"
#include "graphmc/text_io.h"

namespace graphmc {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::kNetflix:
      return "netflix";
    case DatasetKind::kContinuous:
      return "continuous";
    case DatasetKind::kTrafficFile:
      return "traffic-file";
  }
  return "unknown";
}

std::string to_string(TrackerKind kind) {
  switch (kind) {
    case TrackerKind::kOnline:
      return "online";
    case TrackerKind::kRobust:
      return "robust";
    case TrackerKind::kBaselineNoGraph:
      return "baseline-nograph";
  }
  return "unknown";
}

DatasetKind parse_dataset_kind(const std::string& name) {
  if (name == "netflix") return DatasetKind::kNetflix;
  if (name == "continuous") return DatasetKind::kContinuous;
  if (name == "traffic-file") return DatasetKind::kTrafficFile;
  throw ConfigError("unknown dataset '" + name + "'");
}

TrackerKind parse_tracker_kind(const std::string& name) {
  if (name == "online") return TrackerKind::kOnline;
  if (name == "robust") return TrackerKind::kRobust;
  if (name == "baseline-nograph") return TrackerKind::kBaselineNoGraph;
  throw ConfigError("unknown tracker '" + name + "'");
}

ExperimentConfig ExperimentConfig::resolved() const {
  ExperimentConfig out = *this;
  out.netflix.seed = seed;
  out.continuous.seed = seed;
  if (out.tracker == TrackerKind::kBaselineNoGraph) out.hp.lambda2 = 0.0;
  if (out.holdout_seed == 0) out.holdout_seed = seed + 1;
  return out;
}

void ExperimentConfig::validate() const {
  try {
    hp.validate();
    solver.validate();
    options.validate();
    MaskConfig{missing, seed}.validate();
    if (data_dir.empty()) {
      if (dataset == DatasetKind::kNetflix) netflix.validate();
      if (dataset == DatasetKind::kContinuous) continuous.validate();
    }
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
  if (dataset == DatasetKind::kTrafficFile && traffic_csv.empty()) {
    throw ConfigError("traffic-file dataset needs traffic_csv");
  }
  if (!(lasso.tolerance > 0.0)) throw ConfigError("lasso tolerance must be > 0");
  if (lasso.max_iters < 0) throw ConfigError("lasso max_iters must be >= 0");
  if (max_steps < 0) throw ConfigError("max_steps must be >= 0");
  if (diagnostics_every < 1) throw ConfigError("diagnostics_every must be >= 1");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
}

namespace {

json to_json_value(const ExperimentConfig& c) {
  json j;
  j["dataset"] = to_string(c.dataset);
  j["netflix"] = {{"user_communities", c.netflix.user_communities},
                  {"movie_communities", c.netflix.movie_communities},
                  {"users", c.netflix.users},
                  {"movies", c.netflix.movies},
                  {"noise_prob", c.netflix.noise_prob},
                  {"noise_level", c.netflix.noise_level}};
  j["continuous"] = {
      {"rows", c.continuous.rows},
      {"cols", c.continuous.cols},
      {"rank", c.continuous.rank},
      {"noise_sigma", c.continuous.noise_sigma},
      {"outlier_density", c.continuous.outlier_density},
      {"outlier_magnitude_factor", c.continuous.outlier_magnitude_factor}};
  j["data_dir"] = c.data_dir;
  j["traffic_csv"] = c.traffic_csv;
  j["traffic_graph"] = c.traffic_graph;
  j["traffic_truth"] = c.traffic_truth;
  j["tracker"] = to_string(c.tracker);
  j["lambda1"] = c.hp.lambda1;
  j["lambda2"] = c.hp.lambda2;
  j["lambda3"] = c.hp.lambda3;
  j["rank"] = c.hp.rank;
  j["missing"] = c.missing;
  j["solver"] = {{"method", to_string(c.solver.method)},
                 {"cg_rel_tolerance", c.solver.cg_rel_tolerance},
                 {"cg_max_iters", c.solver.cg_max_iters},
                 {"dense_threshold", c.solver.dense_threshold}};
  j["forgetting"] = c.options.forgetting;
  j["predict_after_update"] = c.options.predict_after_update;
  j["anchor_initial"] = c.options.anchor_initial;
  j["lasso"] = {{"tolerance", c.lasso.tolerance},
                {"max_iters", c.lasso.max_iters}};
  j["seed"] = c.seed;
  j["max_steps"] = c.max_steps;
  j["diagnostics"] = c.diagnostics;
  j["diagnostics_every"] = c.diagnostics_every;
  j["out"] = c.out;
  j["sweep"] = {{"lambda1", c.sweep_lambda1},
                {"lambda2", c.sweep_lambda2},
                {"lambda3", c.sweep_lambda3},
                {"holdout_seed", c.holdout_seed},
                {"jobs", c.jobs}};
  return j;
}

template <typename T>
void read_field(const json& obj, const char* key, T& dst) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    dst = it->get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

void reject_unknown(const json& obj, const std::vector<std::string>& known,
                    const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
      throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
  }
}

ExperimentConfig from_json_value(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j,
                 {"dataset", "netflix", "continuous", "data_dir", "traffic_csv",
                  "traffic_graph", "traffic_truth", "tracker", "lambda1",
                  "lambda2", "lambda3", "rank", "missing", "solver",
                  "forgetting", "predict_after_update", "anchor_initial", "lasso", "seed",
                  "max_steps", "diagnostics", "diagnostics_every", "out",
                  "sweep"},
                 "config");
  ExperimentConfig c;
  std::string name;
  if (j.contains("dataset")) {
    read_field(j, "dataset", name);
    c.dataset = parse_dataset_kind(name);
  }
  if (j.contains("netflix")) {
    const json& n = j["netflix"];
    reject_unknown(n,
                   {"user_communities", "movie_communities", "users", "movies",
                    "noise_prob", "noise_level", "seed"},
                   "netflix");
    read_field(n, "user_communities", c.netflix.user_communities);
    read_field(n, "movie_communities", c.netflix.movie_communities);
    read_field(n, "users", c.netflix.users);
    read_field(n, "movies", c.netflix.movies);
    read_field(n, "noise_prob", c.netflix.noise_prob);
    read_field(n, "noise_level", c.netflix.noise_level);
  }
  if (j.contains("continuous")) {
    const json& n = j["continuous"];
    reject_unknown(n,
                   {"rows", "cols", "rank", "noise_sigma", "outlier_density",
                    "outlier_magnitude_factor", "seed"},
                   "continuous");
    read_field(n, "rows", c.continuous.rows);
    read_field(n, "cols", c.continuous.cols);
    read_field(n, "rank", c.continuous.rank);
    read_field(n, "noise_sigma", c.continuous.noise_sigma);
    read_field(n, "outlier_density", c.continuous.outlier_density);
    read_field(n, "outlier_magnitude_factor",
               c.continuous.outlier_magnitude_factor);
  }
  read_field(j, "data_dir", c.data_dir);
  read_field(j, "traffic_csv", c.traffic_csv);
  read_field(j, "traffic_graph", c.traffic_graph);
  read_field(j, "traffic_truth", c.traffic_truth);
  if (j.contains("tracker")) {
    read_field(j, "tracker", name);
    c.tracker = parse_tracker_kind(name);
  }
  read_field(j, "lambda1", c.hp.lambda1);
  read_field(j, "lambda2", c.hp.lambda2);
  read_field(j, "lambda3", c.hp.lambda3);
  read_field(j, "rank", c.hp.rank);
  read_field(j, "missing", c.missing);
  if (j.contains("solver")) {
    const json& s = j["solver"];
    reject_unknown(s,
                   {"method", "cg_rel_tolerance", "cg_max_iters",
                    "dense_threshold"},
                   "solver");
    if (s.contains("method")) {
      read_field(s, "method", name);
      try {
        c.solver.method = parse_solver_method(name);
      } catch (const ValidationError& e) {
        throw ConfigError(e.what());
      }
    }
    read_field(s, "cg_rel_tolerance", c.solver.cg_rel_tolerance);
    read_field(s, "cg_max_iters", c.solver.cg_max_iters);
    read_field(s, "dense_threshold", c.solver.dense_threshold);
  }
  read_field(j, "forgetting", c.options.forgetting);
  read_field(j, "predict_after_update", c.options.predict_after_update);
  read_field(j, "anchor_initial", c.options.anchor_initial);
  if (j.contains("lasso")) {
    reject_unknown(j["lasso"], {"tolerance", "max_iters"}, "lasso");
    read_field(j["lasso"], "tolerance", c.lasso.tolerance);
    read_field(j["lasso"], "max_iters", c.lasso.max_iters);
  }
  read_field(j, "seed", c.seed);
  read_field(j, "max_steps", c.max_steps);
  read_field(j, "diagnostics", c.diagnostics);
  read_field(j, "diagnostics_every", c.diagnostics_every);
  read_field(j, "out", c.out);
  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    reject_unknown(s, {"lambda1", "lambda2", "lambda3", "holdout_seed", "jobs"},
                   "sweep");
    read_field(s, "lambda1", c.sweep_lambda1);
    read_field(s, "lambda2", c.sweep_lambda2);
    read_field(s, "lambda3", c.sweep_lambda3);
    read_field(s, "holdout_seed", c.holdout_seed);
    read_field(s, "jobs", c.jobs);
  }
  return c;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void ensure_parent_dir(const std::string& path) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

}  // namespace

bool ExperimentConfig::operator==(const ExperimentConfig& other) const {
  return to_json_value(*this) == to_json_value(other);
}

std::string config_to_json(const ExperimentConfig& cfg) {
  return to_json_value(cfg).dump(2) + "\n";
}

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  return from_json_value(j);
}

ExperimentConfig load_config(const std::string& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  return config_from_json(text);
}

Dataset build_dataset(const ExperimentConfig& raw) {
  const ExperimentConfig cfg = raw.resolved();
  Dataset d;
  if (!cfg.data_dir.empty()) {
    const fs::path dir(cfg.data_dir);
    d.graph = load_edge_list((dir / "graph.txt").string());
    d.observed = load_stream_csv((dir / "observed.csv").string()).values;
    d.truth = load_stream_csv((dir / "truth.csv").string()).values;
    const fs::path manifest = dir / "manifest.json";
    if (fs::exists(manifest)) {
      const json j = json::parse(read_text_file(manifest.string()));
      d.planted_outliers = j.value("planted_outlier_support", std::int64_t{0});
    }
  } else {
    switch (cfg.dataset) {
      case DatasetKind::kNetflix: {
        NetflixData nf = gen_netflix(cfg.netflix);
        d.graph = std::move(nf.user_graph);
        d.observed = inject_rating_noise(nf.clean, cfg.netflix);
        d.truth = std::move(nf.clean);
        d.column_permutation = std::move(nf.column_permutation);
        break;
      }
      case DatasetKind::kContinuous: {
        ContinuousData cd = gen_continuous(cfg.continuous);
        d.graph = std::move(cd.graph);
        d.observed = std::move(cd.observed);
        d.truth = std::move(cd.clean);
        d.planted_outliers =
            static_cast<std::int64_t>((cd.outliers.array() != 0.0).count());
        break;
      }
      case DatasetKind::kTrafficFile: {
        TrafficStream ts = load_traffic_stream(cfg.traffic_csv, cfg.traffic_graph);
        d.graph = std::move(ts.graph);
        d.observed = std::move(ts.table.values);
        d.truth = cfg.traffic_truth.empty()
                      ? d.observed
                      : load_stream_csv(cfg.traffic_truth).values;
        break;
      }
    }
  }
  if (d.truth.rows() != d.observed.rows() || d.truth.cols() != d.observed.cols()) {
    throw ValidationError("truth and observed streams differ in shape");
  }
  if (d.graph.node_count() != d.observed.rows()) {
    throw ValidationError("graph size does not match stream dimension");
  }
  return d;
}

double RunResult::final_err_db() const {
  return err_db.empty() ? std::numeric_limits<double>::quiet_NaN()
                        : err_db.back();
}

RunResult run_experiment(const ExperimentConfig& raw, const Dataset& data) {
  const ExperimentConfig cfg = raw.resolved();
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const int m = static_cast<int>(data.observed.rows());
  int n = static_cast<int>(data.observed.cols());
  if (cfg.max_steps > 0) n = std::min(n, cfg.max_steps);

  GraphLaplacian laplacian = build_laplacian(data.graph);
  const std::vector<Mask> masks = gen_mask_stream(m, n, {cfg.missing, cfg.seed});
  SubspaceState state = SubspaceState::random_init(m, cfg.hp.rank, cfg.seed);
  AccumulatorSet acc = cfg.options.anchor_initial
                           ? AccumulatorSet::anchored(state.u)
                           : AccumulatorSet::zeros(m, cfg.hp.rank);
  StreamHistory history(cfg.diagnostics, acc.anchor);
  ErrorTracker errors;
  RunResult result;
  result.coefficients.reserve(static_cast<std::size_t>(n));

  for (int t = 0; t < n; ++t) {
    const StreamSample sample =
        StreamSample::make(data.observed.col(t), masks[static_cast<std::size_t>(t)]);
    Eigen::VectorXd reconstruction;
    Eigen::VectorXd coefficients;
    Eigen::VectorXd outliers;
    try {
      if (cfg.tracker == TrackerKind::kRobust) {
        RobustStepResult res = robust_step(state, acc, sample, laplacian, cfg.hp,
                                           cfg.solver, cfg.options, cfg.lasso);
        reconstruction = std::move(res.reconstruction);
        coefficients = std::move(res.coefficients);
        outliers = res.outliers.to_dense();
        result.total_cg_iterations += res.solve.iterations;
      } else {
        StepResult res =
            step(state, acc, sample, laplacian, cfg.hp, cfg.solver, cfg.options);
        reconstruction = std::move(res.reconstruction);
        coefficients = std::move(res.coefficients);
        outliers = Eigen::VectorXd::Zero(m);
        result.total_cg_iterations += res.solve.iterations;
      }
    } catch (const ConvergenceError& e) {
      throw ConvergenceError("step " + std::to_string(t + 1) + ": " + e.what(),
                             e.achieved(), e.iterations());
    }
    errors.add(data.truth.col(t), reconstruction);
    if (cfg.diagnostics) {
      history.record(sample, coefficients, outliers);
      if ((t + 1) % cfg.diagnostics_every == 0 || t + 1 == n) {
        DiagnosticRow row;
        row.t = t + 1;
        row.err_db = errors.err_db();
        const CostSnapshot snap =
            surrogate_and_true_cost(history, state.u, laplacian, cfg.hp);
        row.c_hat = snap.c_hat;
        row.c_true = snap.c_true;
        row.grad_norm =
            true_cost_gradient(history, state.u, laplacian, cfg.hp).norm();
        row.stat_residual = stationarity_residual(acc, laplacian, cfg.hp, state.u);
        result.diagnostics.push_back(row);
      }
    }
    result.coefficients.push_back(std::move(coefficients));
  }
  result.relative_error = errors.series().relative_error;
  result.err_db = errors.series().err_db;
  result.final_subspace = state.u;
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

GenSummary cmd_gen(const ExperimentConfig& raw) {
  const ExperimentConfig cfg = raw.resolved();
  cfg.validate();
  if (cfg.out.empty()) throw ConfigError("gen needs an output directory (--out)");
  if (cfg.dataset == DatasetKind::kTrafficFile) {
    throw ConfigError("gen supports the netflix and continuous datasets");
  }
  ExperimentConfig gen_cfg = cfg;
  gen_cfg.data_dir.clear();
  const Dataset d = build_dataset(gen_cfg);
  fs::create_directories(cfg.out);
  const fs::path dir(cfg.out);
  save_stream_csv((dir / "observed.csv").string(), make_stream_table(d.observed));
  save_stream_csv((dir / "truth.csv").string(), make_stream_table(d.truth));
  save_edge_list((dir / "graph.txt").string(), d.graph);

  json manifest;
  manifest["config"] = to_json_value(raw);
  manifest["rows"] = d.observed.rows();
  manifest["cols"] = d.observed.cols();
  manifest["planted_outlier_support"] = d.planted_outliers;
  if (!d.column_permutation.empty()) {
    manifest["column_permutation"] = d.column_permutation;
  }
  write_text_file((dir / "manifest.json").string(), manifest.dump(2) + "\n");
  return {cfg.out, d.planted_outliers};
}

std::string manifest_path_for(const std::string& results_path) {
  fs::path p(results_path);
  return p.replace_extension(".manifest.json").string();
}

std::string diagnostics_path_for(const std::string& results_path) {
  fs::path p(results_path);
  return p.replace_extension(".diagnostics.csv").string();
}

RunResult cmd_run(const ExperimentConfig& raw) {
  const ExperimentConfig cfg = raw.resolved();
  cfg.validate();
  if (cfg.out.empty()) throw ConfigError("run needs a results path (--out)");
  const Dataset data = build_dataset(cfg);
  RunResult result = run_experiment(cfg, data);

  ensure_parent_dir(cfg.out);
  std::ostringstream csv;
  csv << "t,rel_error,err_db\n";
  for (std::size_t t = 0; t < result.err_db.size(); ++t) {
    csv << (t + 1) << "," << format_double(result.relative_error[t]) << ","
        << format_double(result.err_db[t]) << "\n";
  }
  write_text_file(cfg.out, csv.str());
  if (cfg.diagnostics) {
    std::ostringstream diag;
    write_diagnostics_csv(diag, result.diagnostics);
    write_text_file(diagnostics_path_for(cfg.out), diag.str());
  }

  json manifest;
  manifest["config"] = to_json_value(raw);
  manifest["resolved"] = to_json_value(cfg);
  manifest["rows"] = data.observed.rows();
  manifest["steps"] = result.err_db.size();
  manifest["final_err_db"] = format_double(result.final_err_db());
  manifest["total_cg_iterations"] = result.total_cg_iterations;
  manifest["wall_time_s"] = result.wall_seconds;
  write_text_file(manifest_path_for(cfg.out), manifest.dump(2) + "\n");
  return result;
}

namespace {

std::vector<double> read_err_series(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open results file " + path);
  std::string line;
  if (!std::getline(in, line) || trim(line) != "t,rel_error,err_db") {
    throw ParseError(path + ": expected header 't,rel_error,err_db'", 1);
  }
  std::vector<double> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(trim(line), ',');
    double v = 0.0;
    if (fields.size() != 3 || !parse_double(fields[2], v)) {
      throw ParseError(path + ": malformed results row", line_no);
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace

std::int64_t steps_to_within_1db(const std::vector<double>& err_db) {
  if (err_db.empty()) return 0;
  const double final_value = err_db.back();
  std::size_t first = err_db.size();
  for (std::size_t k = err_db.size(); k-- > 0;) {
    const double v = err_db[k];
    const bool close = (v == final_value) || std::abs(v - final_value) <= 1.0;
    if (!close) break;
    first = k;
  }
  return static_cast<std::int64_t>(first) + 1;
}

std::vector<CompareRow> cmd_compare(const std::vector<std::string>& paths) {
  if (paths.empty()) throw ConfigError("compare needs at least one results file");
  std::vector<CompareRow> rows;
  std::size_t steps = 0;
  for (std::size_t k = 0; k < paths.size(); ++k) {
    const std::vector<double> series = read_err_series(paths[k]);
    if (k == 0) {
      steps = series.size();
    } else if (series.size() != steps) {
      throw ValidationError("results files differ in length: " + paths[0] +
                            " has " + std::to_string(steps) + " steps, " +
                            paths[k] + " has " + std::to_string(series.size()));
    }
    CompareRow row;
    row.path = paths[k];
    row.final_err_db = series.empty() ? std::numeric_limits<double>::quiet_NaN()
                                      : series.back();
    row.steps_to_within_1db = steps_to_within_1db(series);
    row.wall_seconds = std::numeric_limits<double>::quiet_NaN();
    const std::string manifest = manifest_path_for(paths[k]);
    if (fs::exists(manifest)) {
      const json j = json::parse(read_text_file(manifest), nullptr, false);
      if (j.is_object() && j.contains("wall_time_s")) {
        row.wall_seconds = j["wall_time_s"].get<double>();
      }
    }
    rows.push_back(row);
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const CompareRow& a, const CompareRow& b) {
                     if (a.final_err_db != b.final_err_db) {
                       return a.final_err_db < b.final_err_db;
                     }
                     return a.path < b.path;
                   });
  for (CompareRow& row : rows) row.delta_db = row.final_err_db - rows.front().final_err_db;
  return rows;
}

std::string format_compare_table(const std::vector<CompareRow>& rows) {
  std::ostringstream os;
  os << std::left << std::setw(40) << "run" << std::right << std::setw(14)
     << "final_err_db" << std::setw(12) << "delta_db" << std::setw(16)
     << "steps_to_1db" << std::setw(12) << "wall_s" << "\n";
  os << std::fixed;
  for (const CompareRow& row : rows) {
    os << std::left << std::setw(40) << row.path << std::right
       << std::setprecision(3) << std::setw(14) << row.final_err_db
       << std::setw(12) << row.delta_db << std::setw(16)
       << row.steps_to_within_1db << std::setw(12) << row.wall_seconds << "\n";
  }
  return os.str();
}

std::string format_compare_csv(const std::vector<CompareRow>& rows) {
  std::ostringstream os;
  os << "run,final_err_db,delta_db,steps_to_within_1db,wall_time_s\n";
  for (const CompareRow& row : rows) {
    os << row.path << "," << format_double(row.final_err_db) << ","
       << format_double(row.delta_db) << "," << row.steps_to_within_1db << ","
       << format_double(row.wall_seconds) << "\n";
  }
  return os.str();
}

std::vector<SweepRow> cmd_sweep(const ExperimentConfig& raw) {
  const ExperimentConfig cfg = raw.resolved();
  cfg.validate();
  const auto or_default = [](const std::vector<double>& grid, double value) {
    return grid.empty() ? std::vector<double>{value} : grid;
  };
  const std::vector<double> l1 = or_default(cfg.sweep_lambda1, cfg.hp.lambda1);
  const std::vector<double> l2 = or_default(cfg.sweep_lambda2, cfg.hp.lambda2);
  const std::vector<double> l3 = or_default(cfg.sweep_lambda3, cfg.hp.lambda3);

  ExperimentConfig holdout = cfg;
  holdout.seed = cfg.holdout_seed;
  holdout.diagnostics = false;
  holdout = holdout.resolved();
  const Dataset data = build_dataset(holdout);

  std::vector<SweepRow> grid;
  for (double a : l1) {
    for (double b : l2) {
      for (double c : l3) grid.push_back({a, b, c, 0.0});
    }
  }
  const auto evaluate = [&](SweepRow& row) {
    ExperimentConfig point = holdout;
    point.hp.lambda1 = row.lambda1;
    point.hp.lambda2 = row.lambda2;
    point.hp.lambda3 = row.lambda3;
    row.final_err_db = run_experiment(point, data).final_err_db();
  };
  for (std::size_t begin = 0; begin < grid.size();
       begin += static_cast<std::size_t>(cfg.jobs)) {
    const std::size_t end =
        std::min(grid.size(), begin + static_cast<std::size_t>(cfg.jobs));
    std::vector<std::future<void>> batch;
    for (std::size_t k = begin + 1; k < end; ++k) {
      batch.push_back(std::async(std::launch::async, evaluate, std::ref(grid[k])));
    }
    evaluate(grid[begin]);
    for (auto& f : batch) f.get();
  }
  std::stable_sort(grid.begin(), grid.end(),
                   [](const SweepRow& a, const SweepRow& b) {
                     return a.final_err_db < b.final_err_db;
                   });
  if (!cfg.out.empty()) {
    ensure_parent_dir(cfg.out);
    std::ostringstream os;
    os << "lambda1,lambda2,lambda3,final_err_db\n";
    for (const SweepRow& row : grid) {
      os << format_double(row.lambda1) << "," << format_double(row.lambda2)
         << "," << format_double(row.lambda3) << ","
         << format_double(row.final_err_db) << "\n";
    }
    write_text_file(cfg.out, os.str());
  }
  return grid;
}

}  // namespace graphmc
