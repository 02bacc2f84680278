#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "csg2l/graphio/graph.hpp"

namespace csg {

enum class DatasetFormat { content_cites, geomgcn, neutral };

std::string_view to_string(DatasetFormat f);
std::optional<DatasetFormat> parse_dataset_format(std::string_view s);

/// Published statistics of the benchmark graphs. `listed_edges` is the
/// count as published, whose direction/dedup convention is unknown; it is
/// informational only.
struct DatasetInfo {
  std::string_view name;
  DatasetFormat raw_format;
  Index nodes;
  Index features;
  Index classes;
  std::size_t listed_edges;
};

std::span<const DatasetInfo> benchmark_datasets();
const DatasetInfo* find_benchmark(std::string_view name);

/// Where to read a graph from. `primary`/`secondary` are
/// (content, cites), (edges, feature_label) or (dir, unused) by format.
struct DataSource {
  DatasetFormat format = DatasetFormat::neutral;
  std::filesystem::path primary;
  std::filesystem::path secondary;
  std::string name;
};

/// Standard layout under `root/<name>/`: a neutral directory if
/// `meta.json` exists there, otherwise the benchmark's raw files
/// (`<name>.content`/`<name>.cites` or `out1_graph_edges.txt`/
/// `out1_node_feature_label.txt`). Unknown names default to neutral.
DataSource resolve_dataset(const std::filesystem::path& root, std::string_view name);

/// Throws IoError naming the first missing input path.
Graph load_graph(const DataSource& src);

}  // namespace csg
