#include "csg2l/graphio/loaders.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <string_view>
#include <unordered_map>

#include "csg2l/errors.hpp"
#include "text_util.hpp"

namespace csg {
namespace {

std::ifstream open_or_throw(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw IoError("cannot open " + p.string());
  return in;
}

/// Dense class ids by sorted label string.
std::vector<int> densify_labels(const std::vector<std::string>& raw,
                                std::vector<std::string>& names) {
  std::map<std::string, int> ids;
  for (const auto& s : raw) ids.emplace(s, 0);
  int next = 0;
  names.clear();
  for (auto& [s, id] : ids) {
    id = next++;
    names.push_back(s);
  }
  std::vector<int> out;
  out.reserve(raw.size());
  for (const auto& s : raw) out.push_back(ids.at(s));
  return out;
}

}  // namespace

Graph load_content_cites(const std::filesystem::path& content_path,
                         const std::filesystem::path& cites_path, std::string name) {
  const std::string cpath = content_path.string();
  std::ifstream content = open_or_throw(content_path);

  std::unordered_map<std::string, Index> index_of;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> raw_labels;
  std::size_t num_features = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(content, line)) {
    ++lineno;
    const auto tokens = detail::split_ws(line);
    if (tokens.empty()) continue;
    if (tokens.size() < 3) {
      throw ParseError(cpath, lineno, "expected `<id> <features...> <label>`");
    }
    const std::size_t f = tokens.size() - 2;
    if (rows.empty()) {
      num_features = f;
    } else if (f != num_features) {
      throw ParseError(cpath, lineno,
                       "expected " + std::to_string(num_features) + " features, found " +
                           std::to_string(f));
    }
    const std::string id(tokens.front());
    if (!index_of.emplace(id, static_cast<Index>(rows.size())).second) {
      throw ParseError(cpath, lineno, "duplicate node id '" + id + "'");
    }
    std::vector<double> feats(f);
    for (std::size_t k = 0; k < f; ++k) {
      if (!detail::parse_double(tokens[k + 1], feats[k])) {
        throw ParseError(cpath, lineno,
                         "bad feature value '" + std::string(tokens[k + 1]) + "'");
      }
    }
    rows.push_back(std::move(feats));
    raw_labels.emplace_back(tokens.back());
  }
  if (rows.empty()) throw ParseError(cpath, 0, "no nodes");

  const std::string epath = cites_path.string();
  std::ifstream cites = open_or_throw(cites_path);
  std::vector<Edge> edges;
  std::size_t dangling = 0;
  lineno = 0;
  while (std::getline(cites, line)) {
    ++lineno;
    const auto tokens = detail::split_ws(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 2) throw ParseError(epath, lineno, "expected `<cited> <citing>`");
    const auto a = index_of.find(std::string(tokens[0]));
    const auto b = index_of.find(std::string(tokens[1]));
    if (a == index_of.end() || b == index_of.end()) {
      ++dangling;
      continue;
    }
    edges.emplace_back(a->second, b->second);
  }

  Tensor x(static_cast<Index>(rows.size()), static_cast<Index>(num_features));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t k = 0; k < num_features; ++k) {
      x(static_cast<Index>(i), static_cast<Index>(k)) = rows[i][k];
    }
  }
  std::vector<std::string> names;
  std::vector<int> labels = densify_labels(raw_labels, names);
  const auto classes = static_cast<Index>(names.size());
  if (name.empty()) name = content_path.stem().string();
  Graph g = make_graph(std::move(name), std::move(x), edges, std::move(labels), classes,
                       std::move(names));
  g.dangling_edges = dangling;
  return g;
}

Graph load_geomgcn_text(const std::filesystem::path& edge_path,
                        const std::filesystem::path& feature_label_path, std::string name) {
  const std::string fpath = feature_label_path.string();
  std::ifstream fin = open_or_throw(feature_label_path);
  std::string line;
  std::size_t lineno = 0;

  auto read_header = [&](std::ifstream& in, const std::string& path) {
    while (std::getline(in, line)) {
      ++lineno;
      const auto tokens = detail::split_ws(line);
      if (tokens.empty()) continue;
      double probe = 0;
      // A header names its columns; a numeric first field means it is missing.
      if (detail::parse_double(tokens.front(), probe)) {
        throw ParseError(path, lineno, "missing header line");
      }
      return;
    }
    throw ParseError(path, lineno, "empty file");
  };

  read_header(fin, fpath);
  std::vector<std::pair<Index, std::vector<double>>> rows;
  std::vector<std::string> raw_labels_by_row;
  std::size_t num_features = 0;
  while (std::getline(fin, line)) {
    ++lineno;
    const auto tokens = detail::split_ws(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 3) {
      throw ParseError(fpath, lineno, "expected `<id>\\t<f1,f2,...>\\t<label>`");
    }
    long long id = 0;
    if (!detail::parse_int(tokens[0], id) || id < 0) {
      throw ParseError(fpath, lineno, "bad node id '" + std::string(tokens[0]) + "'");
    }
    const auto fields = detail::split_on(tokens[1], ',');
    std::vector<double> feats(fields.size());
    for (std::size_t k = 0; k < fields.size(); ++k) {
      if (!detail::parse_double(fields[k], feats[k])) {
        throw ParseError(fpath, lineno, "bad feature value '" + std::string(fields[k]) + "'");
      }
    }
    if (rows.empty()) {
      num_features = feats.size();
    } else if (feats.size() != num_features) {
      throw ParseError(fpath, lineno,
                       "expected " + std::to_string(num_features) + " features, found " +
                           std::to_string(feats.size()));
    }
    rows.emplace_back(static_cast<Index>(id), std::move(feats));
    raw_labels_by_row.emplace_back(tokens[2]);
  }
  if (rows.empty()) throw ParseError(fpath, lineno, "no nodes");

  const auto m = static_cast<Index>(rows.size());
  Tensor x(m, static_cast<Index>(num_features));
  std::vector<std::string> raw_labels(static_cast<std::size_t>(m));
  std::vector<bool> seen(static_cast<std::size_t>(m), false);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Index id = rows[r].first;
    if (id >= m) {
      throw ParseError(fpath, 0,
                       "node id " + std::to_string(id) + " out of range [0," +
                           std::to_string(m) + ")");
    }
    if (seen[static_cast<std::size_t>(id)]) {
      throw ParseError(fpath, 0, "duplicate node id " + std::to_string(id));
    }
    seen[static_cast<std::size_t>(id)] = true;
    for (std::size_t k = 0; k < num_features; ++k) {
      x(id, static_cast<Index>(k)) = rows[r].second[k];
    }
    raw_labels[static_cast<std::size_t>(id)] = raw_labels_by_row[r];
  }

  const std::string epath = edge_path.string();
  std::ifstream ein = open_or_throw(edge_path);
  lineno = 0;
  read_header(ein, epath);
  std::vector<Edge> edges;
  while (std::getline(ein, line)) {
    ++lineno;
    const auto tokens = detail::split_ws(line);
    if (tokens.empty()) continue;
    long long a = 0, b = 0;
    if (tokens.size() != 2 || !detail::parse_int(tokens[0], a) ||
        !detail::parse_int(tokens[1], b)) {
      throw ParseError(epath, lineno, "expected `<src>\\t<dst>`");
    }
    if (a < 0 || b < 0 || a >= m || b >= m) {
      throw ParseError(epath, lineno,
                       "node id out of range [0," + std::to_string(m) + ")");
    }
    edges.emplace_back(static_cast<Index>(a), static_cast<Index>(b));
  }

  std::vector<std::string> names;
  std::vector<int> labels = densify_labels(raw_labels, names);
  const auto classes = static_cast<Index>(names.size());
  if (name.empty()) name = feature_label_path.parent_path().filename().string();
  return make_graph(std::move(name), std::move(x), edges, std::move(labels), classes,
                    std::move(names));
}

}  // namespace csg
