#include "csg2l/graphio/datasets.hpp"

#include <array>

#include "csg2l/errors.hpp"
#include "csg2l/graphio/loaders.hpp"
#include "csg2l/graphio/neutral.hpp"

namespace csg {

namespace fs = std::filesystem;

namespace {

constexpr std::array<DatasetInfo, 6> kBenchmarks{{
    {"wisconsin", DatasetFormat::geomgcn, 251, 1703, 5, 499},
    {"texas", DatasetFormat::geomgcn, 183, 1703, 5, 309},
    {"cornell", DatasetFormat::geomgcn, 183, 1703, 5, 295},
    {"chameleon", DatasetFormat::geomgcn, 2277, 2325, 5, 36101},
    {"cora", DatasetFormat::content_cites, 2708, 1433, 7, 5429},
    {"citeseer", DatasetFormat::content_cites, 3327, 3703, 6, 4732},
}};

void require_exists(const fs::path& p) {
  if (!fs::exists(p)) throw IoError("missing dataset file: " + p.string());
}

}  // namespace

std::string_view to_string(DatasetFormat f) {
  switch (f) {
    case DatasetFormat::content_cites: return "content_cites";
    case DatasetFormat::geomgcn: return "geomgcn";
    case DatasetFormat::neutral: return "neutral";
  }
  return "?";
}

std::optional<DatasetFormat> parse_dataset_format(std::string_view s) {
  if (s == "content_cites") return DatasetFormat::content_cites;
  if (s == "geomgcn") return DatasetFormat::geomgcn;
  if (s == "neutral") return DatasetFormat::neutral;
  return std::nullopt;
}

std::span<const DatasetInfo> benchmark_datasets() { return kBenchmarks; }

const DatasetInfo* find_benchmark(std::string_view name) {
  for (const auto& d : kBenchmarks) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

DataSource resolve_dataset(const fs::path& root, std::string_view name) {
  const fs::path dir = root / std::string(name);
  DataSource src;
  src.name = std::string(name);
  const DatasetInfo* info = find_benchmark(name);
  if (fs::exists(dir / "meta.json") || info == nullptr) {
    src.format = DatasetFormat::neutral;
    src.primary = dir;
    return src;
  }
  src.format = info->raw_format;
  if (info->raw_format == DatasetFormat::content_cites) {
    src.primary = dir / (std::string(name) + ".content");
    src.secondary = dir / (std::string(name) + ".cites");
  } else {
    src.primary = dir / "out1_graph_edges.txt";
    src.secondary = dir / "out1_node_feature_label.txt";
  }
  return src;
}

Graph load_graph(const DataSource& src) {
  switch (src.format) {
    case DatasetFormat::content_cites:
      require_exists(src.primary);
      require_exists(src.secondary);
      return load_content_cites(src.primary, src.secondary, src.name);
    case DatasetFormat::geomgcn:
      require_exists(src.primary);
      require_exists(src.secondary);
      return load_geomgcn_text(src.primary, src.secondary, src.name);
    case DatasetFormat::neutral: {
      require_exists(src.primary / "meta.json");
      Graph g = read_neutral(src.primary);
      if (!src.name.empty()) g.name = src.name;
      return g;
    }
  }
  throw ConfigError("unknown dataset format");
}

}  // namespace csg
