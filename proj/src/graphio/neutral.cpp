#include "csg2l/graphio/neutral.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <json.hpp>

#include "csg2l/errors.hpp"
#include "text_util.hpp"

namespace csg {
namespace {

namespace fs = std::filesystem;

void append_double(std::string& out, double v) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out.append(buf.data(), ptr);
}

std::ofstream create_or_throw(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw IoError("cannot write " + p.string());
  return out;
}

std::ifstream open_or_throw(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw IoError("cannot open " + p.string());
  return in;
}

}  // namespace

void write_neutral(const Graph& g, const fs::path& dir) {
  if (g.num_features < 1) {
    throw DatasetError(g.name + ": neutral format requires at least one feature column");
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  nlohmann::ordered_json meta;
  meta["name"] = g.name;
  meta["num_nodes"] = g.num_nodes;
  meta["num_features"] = g.num_features;
  meta["num_classes"] = g.num_classes;
  meta["num_edges"] = g.edges.size();
  meta["label_names"] = g.label_names;
  create_or_throw(dir / "meta.json") << meta.dump(2) << "\n";

  {
    auto out = create_or_throw(dir / "edges.tsv");
    for (auto [i, j] : g.edges) out << i << '\t' << j << '\n';
  }
  {
    auto out = create_or_throw(dir / "labels.tsv");
    for (int y : g.labels) out << y << '\n';
  }
  {
    auto out = create_or_throw(dir / "features.tsv");
    std::string row;
    for (Index i = 0; i < g.num_nodes; ++i) {
      row.clear();
      for (Index k = 0; k < g.num_features; ++k) {
        if (k) row.push_back('\t');
        append_double(row, g.features(i, k));
      }
      row.push_back('\n');
      out << row;
    }
    if (!out) throw IoError("write failed: " + (dir / "features.tsv").string());
  }
}

Graph read_neutral(const fs::path& dir) {
  const fs::path meta_path = dir / "meta.json";
  nlohmann::json meta;
  try {
    auto in = open_or_throw(meta_path);
    meta = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(meta_path.string(), 0, e.what());
  }
  Index m = 0, f = 0, c = 0;
  std::vector<std::string> label_names;
  std::string name;
  try {
    m = meta.at("num_nodes").get<Index>();
    f = meta.at("num_features").get<Index>();
    c = meta.at("num_classes").get<Index>();
    name = meta.value("name", dir.filename().string());
    if (meta.contains("label_names")) {
      label_names = meta.at("label_names").get<std::vector<std::string>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(meta_path.string(), 0, e.what());
  }
  if (m < 1 || f < 1 || c < 1) throw ParseError(meta_path.string(), 0, "non-positive size");

  std::string line;
  std::size_t lineno = 0;

  Tensor x(m, f);
  {
    const fs::path p = dir / "features.tsv";
    auto in = open_or_throw(p);
    Index row = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      if (row >= m) throw ParseError(p.string(), lineno, "more rows than num_nodes");
      const auto tokens = detail::split_on(line, '\t');
      if (static_cast<Index>(tokens.size()) != f) {
        throw ParseError(p.string(), lineno,
                         "expected " + std::to_string(f) + " values, found " +
                             std::to_string(tokens.size()));
      }
      for (Index k = 0; k < f; ++k) {
        double v = 0;
        if (!detail::parse_double(tokens[static_cast<std::size_t>(k)], v)) {
          throw ParseError(p.string(), lineno, "bad value");
        }
        x(row, k) = v;
      }
      ++row;
    }
    if (row != m) {
      throw ParseError(p.string(), lineno,
                       "expected " + std::to_string(m) + " rows, found " + std::to_string(row));
    }
  }

  std::vector<int> labels;
  {
    const fs::path p = dir / "labels.tsv";
    auto in = open_or_throw(p);
    lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto tokens = detail::split_ws(line);
      if (tokens.empty()) continue;
      long long y = 0;
      if (tokens.size() != 1 || !detail::parse_int(tokens[0], y)) {
        throw ParseError(p.string(), lineno, "expected one integer label");
      }
      labels.push_back(static_cast<int>(y));
    }
    if (static_cast<Index>(labels.size()) != m) {
      throw ParseError(p.string(), lineno,
                       "expected " + std::to_string(m) + " labels, found " +
                           std::to_string(labels.size()));
    }
  }

  std::vector<Edge> edges;
  {
    const fs::path p = dir / "edges.tsv";
    auto in = open_or_throw(p);
    lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto tokens = detail::split_ws(line);
      if (tokens.empty()) continue;
      long long a = 0, b = 0;
      if (tokens.size() != 2 || !detail::parse_int(tokens[0], a) ||
          !detail::parse_int(tokens[1], b)) {
        throw ParseError(p.string(), lineno, "expected `i<TAB>j`");
      }
      if (a < 0 || b < 0 || a >= m || b >= m) {
        throw ParseError(p.string(), lineno, "node id out of range");
      }
      edges.emplace_back(static_cast<Index>(a), static_cast<Index>(b));
    }
  }

  return make_graph(std::move(name), std::move(x), edges, std::move(labels), c,
                    std::move(label_names));
}

}  // namespace csg
