#pragma once

#include <filesystem>

#include "csg2l/graphio/graph.hpp"

namespace csg {

/// Reads the classic citation-network pair:
///   content: `<id> <f_1> ... <f_F> <label>` (whitespace separated)
///   cites:   `<cited id> <citing id>`
/// Node order follows first appearance in the content file; labels are
/// densified by sorted label string. Citations naming unknown ids are
/// skipped and counted in Graph::dangling_edges.
Graph load_content_cites(const std::filesystem::path& content_path,
                         const std::filesystem::path& cites_path, std::string name = "");

/// Reads the Geom-GCN text pair `out1_graph_edges.txt` (header, then
/// `<src>\t<dst>`) and `out1_node_feature_label.txt` (header, then
/// `<id>\t<f_1>,...,<f_F>\t<label>`). Node ids must be 0..M-1.
Graph load_geomgcn_text(const std::filesystem::path& edge_path,
                        const std::filesystem::path& feature_label_path, std::string name = "");

}  // namespace csg
