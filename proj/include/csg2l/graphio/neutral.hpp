#pragma once

#include <filesystem>

#include "csg2l/graphio/graph.hpp"

namespace csg {

/// Canonical on-disk graph: a directory holding
///   meta.json     {"name", "num_nodes", "num_features", "num_classes",
///                  "num_edges", "label_names"}
///   edges.tsv     `i<TAB>j` per undirected edge, i < j
///   features.tsv  one row per node, F tab-separated values
///   labels.tsv    one class id per line
/// Values are written in shortest round-trip form, so read(write(g)) == g.
void write_neutral(const Graph& g, const std::filesystem::path& dir);
Graph read_neutral(const std::filesystem::path& dir);

}  // namespace csg
