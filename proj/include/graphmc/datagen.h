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

#ifndef GRAPHMC_DATAGEN_H_
#define GRAPHMC_DATAGEN_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "graphmc/graph.h"
#include "graphmc/tracker.h"

namespace graphmc {

// Block-constant ratings: users and movies are split into contiguous
// communities (sizes differ by at most one) and every (user community,
// movie community) pair gets one rating drawn uniformly from {1..5}.
struct NetflixConfig {
  int user_communities = 10;
  int movie_communities = 20;
  int users = 100;
  int movies = 200;
  double noise_prob = 0.3;  // probability an entry is hit by noise
  int noise_level = 1;      // noise offset drawn from {-level..level}
  std::uint64_t seed = 0;

  void validate() const;
};

struct NetflixData {
  Eigen::MatrixXd clean;  // users x movies, columns already permuted
  WeightedGraph user_graph;  // unit-weight clique per user community
  // column_permutation[j] is the generated movie index shown at column j.
  std::vector<int> column_permutation;
  std::vector<int> user_community;
};

NetflixData gen_netflix(const NetflixConfig& cfg);

// Per entry: a ~ Bernoulli(noise_prob), b ~ Uniform{-level..level},
// result = clamp(x + a b, 1, 5). Since b can be 0, the chance an entry
// actually moves is at most noise_prob * 2 level / (2 level + 1).
// Throws ValidationError if x has an entry outside {1..5}.
Eigen::MatrixXd inject_rating_noise(const Eigen::MatrixXd& x,
                                    const NetflixConfig& cfg);

// Continuous analogue of the ratings model: `rank` row communities (clique
// graph), 2 * rank column communities, block values ~ N(0, 1); additive
// N(0, noise_sigma^2) noise; and round(outlier_density * m * n) outliers at
// uniformly random positions with random sign and magnitude in
// [f M, 2 f M), where f is the magnitude factor and M the largest absolute
// entry of either the clean or the noisy matrix.
struct ContinuousConfig {
  int rows = 50;
  int cols = 500;
  int rank = 5;
  double noise_sigma = 0.2;
  double outlier_density = 0.01;
  double outlier_magnitude_factor = 10.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct ContinuousData {
  Eigen::MatrixXd clean;     // rank-`rank` block matrix
  Eigen::MatrixXd observed;  // clean + noise + outliers
  Eigen::MatrixXd outliers;  // sparse S
  WeightedGraph graph;
  std::vector<int> row_community;
};

ContinuousData gen_continuous(const ContinuousConfig& cfg);

struct MaskConfig {
  double missing_fraction = 0.0;  // in [0, 1)
  std::uint64_t seed = 0;

  void validate() const;
};

// n masks of length m; each entry observed independently with probability
// 1 - missing_fraction.
std::vector<Mask> gen_mask_stream(int m, int n, const MaskConfig& cfg);

// Link-load / generic stream CSV:
//   links k
//   t, v_1, ..., v_k      (one line per time step)
// Values are written in shortest round-trip form, so save then load is
// bit-exact.
struct StreamTable {
  std::vector<double> times;
  Eigen::MatrixXd values;  // k x T, one column per time step
};

StreamTable read_stream_csv(std::istream& in);
StreamTable load_stream_csv(const std::string& path);
void write_stream_csv(std::ostream& out, const StreamTable& table);
void save_stream_csv(const std::string& path, const StreamTable& table);

// Columns of `values` as a table with times 1..T.
StreamTable make_stream_table(const Eigen::MatrixXd& values);

struct TrafficStream {
  WeightedGraph graph;  // over link indices
  StreamTable table;
  std::vector<StreamSample> samples;  // fully observed
};

// Reads the stream CSV and its link-adjacency graph (edge-list format over
// link indices). An empty graph_path selects the CSV path with its
// extension replaced by ".graph". Throws ParseError for malformed rows or
// width drift and ValidationError when the graph node count differs from k.
TrafficStream load_traffic_stream(const std::string& csv_path,
                                  const std::string& graph_path = "");

// Link-adjacency graph: links are adjacent when they share an endpoint.
// `link_endpoints[l]` holds the two node ids of link l.
WeightedGraph link_adjacency_graph(
    const std::vector<std::pair<int, int>>& link_endpoints);

}  // namespace graphmc

#endif  // GRAPHMC_DATAGEN_H_
