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

#include "graphmc/graph.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <utility>

#include "graphmc/errors.h"
#include "graphmc/text_io.h"

namespace graphmc {

namespace detail {

struct SpectralCache {
  std::once_flag eig_once;
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  std::once_flag sqrt_once;
  Eigen::MatrixXd sqrt;
};

}  // namespace detail

namespace {

std::string index_string(Eigen::Index i, Eigen::Index j) {
  std::ostringstream os;
  os << "(" << i << ", " << j << ")";
  return os.str();
}

Eigen::MatrixXd sqrt_from_spectrum(const Eigen::VectorXd& values,
                                   const Eigen::MatrixXd& vectors) {
  const double scale = values.size() == 0 ? 0.0 : values.cwiseAbs().maxCoeff();
  Eigen::VectorXd roots(values.size());
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    if (values(k) < -kEigenTolerance * scale) {
      std::ostringstream os;
      os << "laplacian_sqrt: eigenvalue " << values(k)
         << " is negative beyond tolerance; matrix is not PSD";
      throw ValidationError(os.str());
    }
    roots(k) = std::sqrt(std::max(values(k), 0.0));
  }
  Eigen::MatrixXd s = vectors * roots.asDiagonal() * vectors.transpose();
  return 0.5 * (s + s.transpose());
}

}  // namespace

WeightedGraph WeightedGraph::empty(int node_count) {
  if (node_count <= 0) throw ValidationError("graph needs at least one node");
  return WeightedGraph(Eigen::MatrixXd::Zero(node_count, node_count));
}

WeightedGraph WeightedGraph::from_edges(int node_count,
                                        const std::vector<Edge>& edges) {
  WeightedGraph g = empty(node_count);
  std::set<std::pair<int, int>> seen;
  for (const Edge& e : edges) {
    if (e.i < 0 || e.j < 0 || e.i >= node_count || e.j >= node_count) {
      throw ValidationError("edge " + index_string(e.i, e.j) +
                            " references a node outside [0, " +
                            std::to_string(node_count) + ")");
    }
    if (e.i == e.j) {
      throw ValidationError("self loop at node " + std::to_string(e.i));
    }
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw ValidationError("edge " + index_string(e.i, e.j) +
                            " must have a finite positive weight");
    }
    const auto key = std::minmax(e.i, e.j);
    if (!seen.insert(key).second) {
      throw ValidationError("duplicate edge " + index_string(e.i, e.j));
    }
    g.weights(e.i, e.j) = e.weight;
    g.weights(e.j, e.i) = e.weight;
  }
  return g;
}

std::vector<Edge> WeightedGraph::edges() const {
  std::vector<Edge> out;
  for (Eigen::Index i = 0; i < weights.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < weights.cols(); ++j) {
      if (weights(i, j) != 0.0) {
        out.push_back({static_cast<int>(i), static_cast<int>(j), weights(i, j)});
      }
    }
  }
  return out;
}

GraphLaplacian::GraphLaplacian(Eigen::MatrixXd laplacian)
    : laplacian_(std::move(laplacian)),
      cache_(std::make_shared<detail::SpectralCache>()) {}

GraphLaplacian GraphLaplacian::from_matrix(Eigen::MatrixXd laplacian) {
  if (laplacian.rows() != laplacian.cols() || laplacian.rows() == 0) {
    throw ValidationError("laplacian must be a non-empty square matrix");
  }
  for (Eigen::Index i = 0; i < laplacian.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < laplacian.cols(); ++j) {
      if (laplacian(i, j) != laplacian(j, i)) {
        throw ValidationError("laplacian is not symmetric at " +
                              index_string(i, j));
      }
    }
  }
  return GraphLaplacian(std::move(laplacian));
}

const detail::SpectralCache& GraphLaplacian::spectral() const {
  std::call_once(cache_->eig_once, [this] {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(laplacian_);
    cache_->eigenvalues = eig.eigenvalues();
    cache_->eigenvectors = eig.eigenvectors();
  });
  return *cache_;
}

const Eigen::VectorXd& GraphLaplacian::eigenvalues() const {
  return spectral().eigenvalues;
}

const Eigen::MatrixXd& GraphLaplacian::eigenvectors() const {
  return spectral().eigenvectors;
}

const Eigen::MatrixXd& GraphLaplacian::sqrt() const {
  const auto& spec = spectral();
  std::call_once(cache_->sqrt_once, [&] {
    cache_->sqrt = sqrt_from_spectrum(spec.eigenvalues, spec.eigenvectors);
  });
  return cache_->sqrt;
}

GraphLaplacian build_laplacian(const WeightedGraph& graph) {
  const Eigen::MatrixXd& w = graph.weights;
  if (w.rows() != w.cols() || w.rows() == 0) {
    throw ValidationError("weights must be a non-empty square matrix");
  }
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    if (w(i, i) != 0.0) {
      throw ValidationError("nonzero diagonal weight at " + index_string(i, i));
    }
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      if (!std::isfinite(w(i, j))) {
        throw ValidationError("non-finite weight at " + index_string(i, j));
      }
      if (w(i, j) < 0.0) {
        throw ValidationError("negative weight at " + index_string(i, j));
      }
      if (j > i && w(i, j) != w(j, i)) {
        throw ValidationError("asymmetric weights at " + index_string(i, j));
      }
    }
  }
  Eigen::MatrixXd lap = -w;
  lap.diagonal() = w.rowwise().sum();
  return GraphLaplacian::from_matrix(std::move(lap));
}

Eigen::MatrixXd laplacian_sqrt(const Eigen::MatrixXd& laplacian) {
  if (laplacian.rows() != laplacian.cols()) {
    throw ValidationError("laplacian_sqrt: matrix must be square");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(laplacian);
  return sqrt_from_spectrum(eig.eigenvalues(), eig.eigenvectors());
}

double smoothness(const GraphLaplacian& laplacian, const Eigen::MatrixXd& a) {
  if (a.rows() != laplacian.size()) {
    throw ValidationError("smoothness: A has " + std::to_string(a.rows()) +
                          " rows, laplacian has " +
                          std::to_string(laplacian.size()));
  }
  return (a.array() * (laplacian.matrix() * a).array()).sum();
}

WeightedGraph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  long long nodes = -1;
  std::vector<Edge> edges;
  std::vector<std::size_t> edge_lines;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto fields = split_whitespace(body);
    if (nodes < 0) {
      if (fields.size() != 2 || fields[0] != "nodes" ||
          !parse_int(fields[1], nodes) || nodes <= 0) {
        throw ParseError("expected header 'nodes m' with m > 0", line_no);
      }
      continue;
    }
    long long i = 0, j = 0;
    double w = 0.0;
    if (fields.size() != 3 || !parse_int(fields[0], i) ||
        !parse_int(fields[1], j) || !parse_double(fields[2], w)) {
      throw ParseError("expected edge 'i j w'", line_no);
    }
    if (i < 0 || j < 0 || i >= nodes || j >= nodes) {
      throw ParseError("node index out of range", line_no);
    }
    if (!(w > 0.0)) throw ParseError("edge weight must be positive", line_no);
    edges.push_back({static_cast<int>(i), static_cast<int>(j), w});
    edge_lines.push_back(line_no);
  }
  if (nodes < 0) throw ParseError("missing 'nodes m' header", 0);
  std::set<std::pair<int, int>> seen;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (edges[k].i == edges[k].j) {
      throw ParseError("self loop", edge_lines[k]);
    }
    if (!seen.insert(std::minmax(edges[k].i, edges[k].j)).second) {
      throw ParseError("duplicate edge", edge_lines[k]);
    }
  }
  return WeightedGraph::from_edges(static_cast<int>(nodes), edges);
}

WeightedGraph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open graph file " + path);
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const WeightedGraph& graph) {
  out << "nodes " << graph.node_count() << "\n";
  for (const Edge& e : graph.edges()) {
    out << e.i << " " << e.j << " " << format_double(e.weight) << "\n";
  }
}

void save_edge_list(const std::string& path, const WeightedGraph& graph) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write graph file " + path);
  write_edge_list(out, graph);
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace graphmc
