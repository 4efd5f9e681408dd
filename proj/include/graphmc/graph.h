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

#ifndef GRAPHMC_GRAPH_H_
#define GRAPHMC_GRAPH_H_

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace graphmc {

struct Edge {
  int i = 0;
  int j = 0;
  double weight = 1.0;
};

// Undirected weighted graph over m nodes, stored as a dense symmetric
// adjacency matrix. Validity (symmetry, zero diagonal, non-negative weights)
// is checked by build_laplacian, not on construction.
struct WeightedGraph {
  Eigen::MatrixXd weights;

  WeightedGraph() = default;
  explicit WeightedGraph(Eigen::MatrixXd w) : weights(std::move(w)) {}

  // Graph with no edges.
  static WeightedGraph empty(int node_count);

  // Densifies an edge list. Rejects out-of-range indices, self loops,
  // non-positive weights and duplicate edges (in either orientation).
  static WeightedGraph from_edges(int node_count, const std::vector<Edge>& edges);

  int node_count() const { return static_cast<int>(weights.rows()); }

  // Each undirected edge once, with i < j, in row-major order.
  std::vector<Edge> edges() const;
};

namespace detail {
struct SpectralCache;
}  // namespace detail

// L = D - W for a validated WeightedGraph. Immutable; copies share a lazily
// filled spectral cache (eigendecomposition and PSD square root), so a
// GraphLaplacian may be read from several threads.
class GraphLaplacian {
 public:
  // Wraps an already-formed symmetric PSD matrix. Use build_laplacian for
  // graph input; this entry point exists for operators such as L = I.
  static GraphLaplacian from_matrix(Eigen::MatrixXd laplacian);

  const Eigen::MatrixXd& matrix() const { return laplacian_; }
  int size() const { return static_cast<int>(laplacian_.rows()); }

  // Ascending eigenvalues / matching orthonormal eigenvectors of L.
  const Eigen::VectorXd& eigenvalues() const;
  const Eigen::MatrixXd& eigenvectors() const;

  // Symmetric PSD S with S * S = L.
  const Eigen::MatrixXd& sqrt() const;

 private:
  explicit GraphLaplacian(Eigen::MatrixXd laplacian);
  const detail::SpectralCache& spectral() const;

  Eigen::MatrixXd laplacian_;
  std::shared_ptr<detail::SpectralCache> cache_;
};

// Relative tolerance for treating a Laplacian eigenvalue as non-negative.
inline constexpr double kEigenTolerance = 1e-10;

// Throws ValidationError naming the first offending (i, j) if the graph is
// asymmetric, has a nonzero diagonal, or carries a negative weight.
GraphLaplacian build_laplacian(const WeightedGraph& graph);

// PSD square root via symmetric eigendecomposition. Eigenvalues in
// [-kEigenTolerance * ||L||, 0) are clamped to zero; anything more negative
// throws ValidationError.
Eigen::MatrixXd laplacian_sqrt(const Eigen::MatrixXd& laplacian);

// tr(A^T L A), which equals sum over edges {i, j} of W_ij ||a_i - a_j||^2.
// Throws ValidationError on a row-count mismatch.
double smoothness(const GraphLaplacian& laplacian, const Eigen::MatrixXd& a);

// Edge-list text format:
//   nodes m
//   i j w        (one line per undirected edge, 0-based, w > 0)
// Blank lines and lines starting with '#' are ignored.
WeightedGraph read_edge_list(std::istream& in);
WeightedGraph load_edge_list(const std::string& path);
void write_edge_list(std::ostream& out, const WeightedGraph& graph);
void save_edge_list(const std::string& path, const WeightedGraph& graph);

}  // namespace graphmc

#endif  // GRAPHMC_GRAPH_H_
