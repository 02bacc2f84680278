#pragma once

#include <string>
#include <utility>
#include <vector>

#include "csg2l/numkit/tensor.hpp"

namespace csg {

using Edge = std::pair<Index, Index>;

/// Attributed, labelled, undirected graph.
///
/// Invariants (enforced by make_graph): edges are stored once with i < j,
/// sorted and free of duplicates and self-loops; labels lie in
/// [0, num_classes) and every class is populated.
struct Graph {
  std::string name;
  Index num_nodes = 0;
  Index num_features = 0;
  Index num_classes = 0;
  Tensor features;
  std::vector<Edge> edges;
  std::vector<int> labels;
  /// Original label strings, indexed by dense class id.
  std::vector<std::string> label_names;

  /// Loader diagnostics.
  std::size_t dangling_edges = 0;
  std::size_t self_loops = 0;
  std::size_t duplicate_edges = 0;
};

/// Canonicalizes `raw_edges` (either direction, duplicates, self-loops
/// allowed) and validates everything else. Throws DatasetError.
Graph make_graph(std::string name, Tensor features, const std::vector<Edge>& raw_edges,
                 std::vector<int> labels, Index num_classes,
                 std::vector<std::string> label_names = {});

/// Symmetric propagation matrix D^{-1/2}(A+I)D^{-1/2}, d_i = degree in A+I.
struct NormalizedAdjacency {
  SparseMatrix matrix;

  Index size() const { return matrix.rows(); }
};

NormalizedAdjacency normalize_adjacency(const Graph& g);

/// Same normalization for an explicit node count and edge list (used by
/// edge-perturbed views). Edges must be canonical.
NormalizedAdjacency normalize_adjacency(Index num_nodes, const std::vector<Edge>& edges);

/// Nodes of each class, ascending, indexed by class id.
std::vector<std::vector<Index>> nodes_by_class(const Graph& g);

}  // namespace csg
