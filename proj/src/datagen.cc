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

#include "graphmc/datagen.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "graphmc/errors.h"
#include "graphmc/rng.h"
#include "graphmc/text_io.h"

namespace graphmc {

namespace {

// Contiguous split of n items into k groups whose sizes differ by <= 1.
std::vector<int> contiguous_groups(int n, int k) {
  std::vector<int> group(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    group[static_cast<std::size_t>(i)] = static_cast<int>(
        (static_cast<long long>(i) * k) / n);
  }
  return group;
}

WeightedGraph clique_graph(const std::vector<int>& group) {
  const int n = static_cast<int>(group.size());
  WeightedGraph g = WeightedGraph::empty(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (group[static_cast<std::size_t>(i)] ==
          group[static_cast<std::size_t>(j)]) {
        g.weights(i, j) = 1.0;
        g.weights(j, i) = 1.0;
      }
    }
  }
  return g;
}

}  // namespace

void NetflixConfig::validate() const {
  if (users < 1 || movies < 1) throw ValidationError("users/movies must be >= 1");
  if (user_communities < 1 || user_communities > users) {
    throw ValidationError("user_communities must lie in [1, users]");
  }
  if (movie_communities < 1 || movie_communities > movies) {
    throw ValidationError("movie_communities must lie in [1, movies]");
  }
  if (!(noise_prob >= 0.0 && noise_prob <= 1.0)) {
    throw ValidationError("noise_prob must lie in [0, 1]");
  }
  if (noise_level < 1 || noise_level > 5) {
    throw ValidationError("noise_level must lie in {1..5}");
  }
}

NetflixData gen_netflix(const NetflixConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed, streams::kData);
  Eigen::MatrixXd block_value(cfg.user_communities, cfg.movie_communities);
  for (int a = 0; a < cfg.user_communities; ++a) {
    for (int b = 0; b < cfg.movie_communities; ++b) {
      block_value(a, b) = static_cast<double>(rng.uniform_int(1, 5));
    }
  }
  NetflixData out;
  out.user_community = contiguous_groups(cfg.users, cfg.user_communities);
  const std::vector<int> movie_community =
      contiguous_groups(cfg.movies, cfg.movie_communities);
  Rng perm_rng(cfg.seed, streams::kPermutation);
  out.column_permutation = perm_rng.permutation(cfg.movies);
  out.clean.resize(cfg.users, cfg.movies);
  for (int j = 0; j < cfg.movies; ++j) {
    const int movie = out.column_permutation[static_cast<std::size_t>(j)];
    for (int i = 0; i < cfg.users; ++i) {
      out.clean(i, j) =
          block_value(out.user_community[static_cast<std::size_t>(i)],
                      movie_community[static_cast<std::size_t>(movie)]);
    }
  }
  out.user_graph = clique_graph(out.user_community);
  return out;
}

Eigen::MatrixXd inject_rating_noise(const Eigen::MatrixXd& x,
                                    const NetflixConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed, streams::kNoise);
  Eigen::MatrixXd out = x;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      const double v = x(i, j);
      if (!(v >= 1.0 && v <= 5.0) || v != std::round(v)) {
        throw ValidationError("rating outside {1..5} at (" + std::to_string(i) +
                              ", " + std::to_string(j) + ")");
      }
      // Both draws happen for every entry so the stream position does not
      // depend on earlier outcomes.
      const bool hit = rng.bernoulli(cfg.noise_prob);
      const auto offset = rng.uniform_int(-cfg.noise_level, cfg.noise_level);
      if (hit) {
        out(i, j) = std::clamp(v + static_cast<double>(offset), 1.0, 5.0);
      }
    }
  }
  return out;
}

void ContinuousConfig::validate() const {
  if (rows < 1 || cols < 1) throw ValidationError("rows/cols must be >= 1");
  if (rank < 1 || rank > rows || 2 * rank > cols) {
    throw ValidationError("rank must satisfy 1 <= rank <= rows, 2 rank <= cols");
  }
  if (!(noise_sigma >= 0.0)) throw ValidationError("noise_sigma must be >= 0");
  if (!(outlier_density >= 0.0 && outlier_density <= 1.0)) {
    throw ValidationError("outlier_density must lie in [0, 1]");
  }
  if (!(outlier_magnitude_factor >= 1.0)) {
    throw ValidationError("outlier_magnitude_factor must be >= 1");
  }
}

ContinuousData gen_continuous(const ContinuousConfig& cfg) {
  cfg.validate();
  const int col_groups = 2 * cfg.rank;
  Rng rng(cfg.seed, streams::kData);
  Eigen::MatrixXd block_value(cfg.rank, col_groups);
  for (int a = 0; a < cfg.rank; ++a) {
    for (int b = 0; b < col_groups; ++b) block_value(a, b) = rng.normal();
  }
  ContinuousData out;
  out.row_community = contiguous_groups(cfg.rows, cfg.rank);
  Rng perm_rng(cfg.seed, streams::kPermutation);
  const std::vector<int> perm = perm_rng.permutation(cfg.cols);
  const std::vector<int> col_group = contiguous_groups(cfg.cols, col_groups);
  out.clean.resize(cfg.rows, cfg.cols);
  for (int j = 0; j < cfg.cols; ++j) {
    const int g = col_group[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])];
    for (int i = 0; i < cfg.rows; ++i) {
      out.clean(i, j) = block_value(out.row_community[static_cast<std::size_t>(i)], g);
    }
  }
  out.graph = clique_graph(out.row_community);

  Rng noise_rng(cfg.seed, streams::kNoise);
  Eigen::MatrixXd noisy = out.clean;
  for (int i = 0; i < cfg.rows; ++i) {
    for (int j = 0; j < cfg.cols; ++j) {
      noisy(i, j) += cfg.noise_sigma * noise_rng.normal();
    }
  }
  const double peak =
      std::max(out.clean.cwiseAbs().maxCoeff(), noisy.cwiseAbs().maxCoeff());
  const double floor = cfg.outlier_magnitude_factor * peak;

  const std::int64_t total = static_cast<std::int64_t>(cfg.rows) * cfg.cols;
  const auto count = static_cast<std::int64_t>(
      std::llround(cfg.outlier_density * static_cast<double>(total)));
  Rng outlier_rng(cfg.seed, streams::kOutliers);
  std::vector<std::int64_t> cells =
      outlier_rng.sample_without_replacement(total, count);
  std::sort(cells.begin(), cells.end());
  out.outliers = Eigen::MatrixXd::Zero(cfg.rows, cfg.cols);
  for (const std::int64_t cell : cells) {
    const auto i = static_cast<Eigen::Index>(cell / cfg.cols);
    const auto j = static_cast<Eigen::Index>(cell % cfg.cols);
    const double sign = outlier_rng.bernoulli(0.5) ? 1.0 : -1.0;
    out.outliers(i, j) = sign * floor * (1.0 + outlier_rng.uniform01());
  }
  out.observed = noisy + out.outliers;
  return out;
}

void MaskConfig::validate() const {
  if (!(missing_fraction >= 0.0 && missing_fraction < 1.0)) {
    throw ValidationError("missing_fraction must lie in [0, 1)");
  }
}

std::vector<Mask> gen_mask_stream(int m, int n, const MaskConfig& cfg) {
  cfg.validate();
  if (m < 1 || n < 0) throw ValidationError("gen_mask_stream: bad dimensions");
  Rng rng(cfg.seed, streams::kMask);
  std::vector<Mask> masks;
  masks.reserve(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t) {
    Mask mask(m);
    for (int i = 0; i < m; ++i) mask(i) = rng.uniform01() >= cfg.missing_fraction;
    masks.push_back(std::move(mask));
  }
  return masks;
}

StreamTable read_stream_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  long long k = -1;
  std::vector<double> times;
  std::vector<double> flat;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    if (k < 0) {
      const auto fields = split_whitespace(body);
      if (fields.size() != 2 || fields[0] != "links" ||
          !parse_int(fields[1], k) || k <= 0) {
        throw ParseError("expected header 'links k' with k > 0", line_no);
      }
      continue;
    }
    const auto fields = split(body, ',');
    if (static_cast<long long>(fields.size()) != k + 1) {
      throw ParseError("expected " + std::to_string(k + 1) + " fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    }
    double t = 0.0;
    if (!parse_double(fields[0], t)) throw ParseError("bad time value", line_no);
    times.push_back(t);
    for (std::size_t c = 1; c < fields.size(); ++c) {
      double v = 0.0;
      if (!parse_double(fields[c], v)) {
        throw ParseError("bad value in column " + std::to_string(c), line_no);
      }
      flat.push_back(v);
    }
  }
  if (k < 0) throw ParseError("missing 'links k' header", 0);
  StreamTable table;
  table.times = std::move(times);
  const auto steps = static_cast<Eigen::Index>(table.times.size());
  table.values = Eigen::Map<Eigen::MatrixXd>(flat.data(), k, steps);
  return table;
}

StreamTable load_stream_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open stream file " + path);
  return read_stream_csv(in);
}

void write_stream_csv(std::ostream& out, const StreamTable& table) {
  if (static_cast<Eigen::Index>(table.times.size()) != table.values.cols()) {
    throw ValidationError("stream table: times and columns differ in count");
  }
  out << "links " << table.values.rows() << "\n";
  for (Eigen::Index t = 0; t < table.values.cols(); ++t) {
    out << format_double(table.times[static_cast<std::size_t>(t)]);
    for (Eigen::Index i = 0; i < table.values.rows(); ++i) {
      out << "," << format_double(table.values(i, t));
    }
    out << "\n";
  }
}

void save_stream_csv(const std::string& path, const StreamTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write stream file " + path);
  write_stream_csv(out, table);
  if (!out) throw IoError("write failed for " + path);
}

StreamTable make_stream_table(const Eigen::MatrixXd& values) {
  StreamTable table;
  table.values = values;
  table.times.resize(static_cast<std::size_t>(values.cols()));
  for (std::size_t t = 0; t < table.times.size(); ++t) {
    table.times[t] = static_cast<double>(t + 1);
  }
  return table;
}

TrafficStream load_traffic_stream(const std::string& csv_path,
                                  const std::string& graph_path) {
  TrafficStream out;
  out.table = load_stream_csv(csv_path);
  std::string gpath = graph_path;
  if (gpath.empty()) {
    gpath = std::filesystem::path(csv_path).replace_extension(".graph").string();
  }
  out.graph = load_edge_list(gpath);
  if (out.graph.node_count() != out.table.values.rows()) {
    throw ValidationError("graph " + gpath + " covers " +
                          std::to_string(out.graph.node_count()) +
                          " links but the stream has " +
                          std::to_string(out.table.values.rows()) +
                          "; unknown link id");
  }
  out.samples.reserve(static_cast<std::size_t>(out.table.values.cols()));
  for (Eigen::Index t = 0; t < out.table.values.cols(); ++t) {
    out.samples.push_back(StreamSample::fully_observed(out.table.values.col(t)));
  }
  return out;
}

WeightedGraph link_adjacency_graph(
    const std::vector<std::pair<int, int>>& link_endpoints) {
  const int k = static_cast<int>(link_endpoints.size());
  WeightedGraph g = WeightedGraph::empty(k);
  for (int a = 0; a < k; ++a) {
    const auto [a0, a1] = link_endpoints[static_cast<std::size_t>(a)];
    for (int b = a + 1; b < k; ++b) {
      const auto [b0, b1] = link_endpoints[static_cast<std::size_t>(b)];
      if (a0 == b0 || a0 == b1 || a1 == b0 || a1 == b1) {
        g.weights(a, b) = 1.0;
        g.weights(b, a) = 1.0;
      }
    }
  }
  return g;
}

}  // namespace graphmc
