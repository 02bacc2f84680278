#include "csg2l/graphio/graph.hpp"

#include <algorithm>
#include <cmath>

#include "csg2l/errors.hpp"

namespace csg {

Graph make_graph(std::string name, Tensor features, const std::vector<Edge>& raw_edges,
                 std::vector<int> labels, Index num_classes,
                 std::vector<std::string> label_names) {
  Graph g;
  g.name = std::move(name);
  g.num_nodes = features.rows();
  g.num_features = features.cols();
  g.num_classes = num_classes;

  if (static_cast<Index>(labels.size()) != g.num_nodes) {
    throw DatasetError(g.name + ": " + std::to_string(labels.size()) + " labels for " +
                       std::to_string(g.num_nodes) + " nodes");
  }
  if (num_classes < 1) throw DatasetError(g.name + ": no classes");
  std::vector<Index> class_count(static_cast<std::size_t>(num_classes), 0);
  for (int y : labels) {
    if (y < 0 || y >= num_classes) {
      throw DatasetError(g.name + ": label " + std::to_string(y) + " outside [0," +
                         std::to_string(num_classes) + ")");
    }
    ++class_count[static_cast<std::size_t>(y)];
  }
  for (Index c = 0; c < num_classes; ++c) {
    if (class_count[static_cast<std::size_t>(c)] == 0) {
      throw DatasetError(g.name + ": class " + std::to_string(c) + " has no nodes");
    }
  }

  g.edges.reserve(raw_edges.size());
  for (auto [i, j] : raw_edges) {
    if (i < 0 || j < 0 || i >= g.num_nodes || j >= g.num_nodes) {
      throw DatasetError(g.name + ": edge (" + std::to_string(i) + "," + std::to_string(j) +
                         ") has an endpoint outside [0," + std::to_string(g.num_nodes) + ")");
    }
    if (i == j) {
      ++g.self_loops;
      continue;
    }
    g.edges.emplace_back(std::min(i, j), std::max(i, j));
  }
  std::sort(g.edges.begin(), g.edges.end());
  const auto last = std::unique(g.edges.begin(), g.edges.end());
  g.duplicate_edges = static_cast<std::size_t>(std::distance(last, g.edges.end()));
  g.edges.erase(last, g.edges.end());

  g.features = std::move(features);
  g.labels = std::move(labels);
  g.label_names = std::move(label_names);
  return g;
}

NormalizedAdjacency normalize_adjacency(Index num_nodes, const std::vector<Edge>& edges) {
  std::vector<double> degree(static_cast<std::size_t>(num_nodes), 1.0);
  for (auto [i, j] : edges) {
    degree[static_cast<std::size_t>(i)] += 1.0;
    degree[static_cast<std::size_t>(j)] += 1.0;
  }
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(num_nodes) + 2 * edges.size());
  for (Index i = 0; i < num_nodes; ++i) {
    entries.emplace_back(i, i, 1.0 / degree[static_cast<std::size_t>(i)]);
  }
  for (auto [i, j] : edges) {
    // d_i * d_j is commutative in floating point, so both entries are
    // bit-identical.
    const double w = 1.0 / std::sqrt(degree[static_cast<std::size_t>(i)] *
                                     degree[static_cast<std::size_t>(j)]);
    entries.emplace_back(i, j, w);
    entries.emplace_back(j, i, w);
  }
  NormalizedAdjacency adj;
  adj.matrix.resize(num_nodes, num_nodes);
  adj.matrix.setFromTriplets(entries.begin(), entries.end());
  adj.matrix.makeCompressed();
  return adj;
}

NormalizedAdjacency normalize_adjacency(const Graph& g) {
  return normalize_adjacency(g.num_nodes, g.edges);
}

std::vector<std::vector<Index>> nodes_by_class(const Graph& g) {
  std::vector<std::vector<Index>> out(static_cast<std::size_t>(g.num_classes));
  for (Index i = 0; i < g.num_nodes; ++i) {
    out[static_cast<std::size_t>(g.labels[static_cast<std::size_t>(i)])].push_back(i);
  }
  return out;
}

}  // namespace csg
