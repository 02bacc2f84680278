#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include <unistd.h>

#include "csg2l/errors.hpp"
#include "csg2l/graphio/datasets.hpp"
#include "csg2l/graphio/graph.hpp"
#include "csg2l/graphio/loaders.hpp"
#include "csg2l/graphio/neutral.hpp"
#include "csg2l/graphio/splits.hpp"

using namespace csg;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = CSG_FIXTURES;

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("csg2l_graphio_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name, std::ios::binary) << text;
    return path / name;
  }
};

// Dense oracle: D^{-1/2} (A + I) D^{-1/2} built entry by entry.
Tensor dense_normalized(Index n, const std::vector<Edge>& edges) {
  Tensor a = Tensor::Identity(n, n);
  for (auto [i, j] : edges) {
    a(i, j) = 1.0;
    a(j, i) = 1.0;
  }
  Eigen::VectorXd d = a.rowwise().sum();
  Tensor out(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) out(i, j) = a(i, j) / std::sqrt(d(i) * d(j));
  }
  return out;
}

Graph tiny_graph(Index n, std::vector<Edge> edges, std::vector<int> labels, Index classes) {
  return make_graph("tiny", Tensor::Ones(n, 2), edges, std::move(labels), classes);
}

}  // namespace

TEST_CASE("make_graph: canonicalizes edges and validates input") {
  Graph g = tiny_graph(3, {{1, 0}, {0, 1}, {2, 2}, {1, 2}}, {0, 1, 0}, 2);
  CHECK(g.edges == std::vector<Edge>{{0, 1}, {1, 2}});
  CHECK(g.self_loops == 1);
  CHECK(g.duplicate_edges == 1);
  CHECK_THROWS_AS(tiny_graph(3, {{0, 3}}, {0, 1, 0}, 2), DatasetError);
  CHECK_THROWS_AS(tiny_graph(3, {}, {0, 2, 0}, 2), DatasetError);
  // Class 1 never appears.
  CHECK_THROWS_AS(tiny_graph(3, {}, {0, 0, 0}, 2), DatasetError);
}

TEST_CASE("load_content_cites: minimal two-node fixture") {
  TempDir d;
  const auto content = d.write("t.content", "a 1 0 X\nb 0 1 X\n");
  const auto cites = d.write("t.cites", "a b\n");
  const Graph g = load_content_cites(content, cites, "t");
  CHECK(g.num_nodes == 2);
  CHECK(g.num_features == 2);
  CHECK(g.num_classes == 1);
  CHECK(g.edges == std::vector<Edge>{{0, 1}});
}

TEST_CASE("load_content_cites: labels by sorted string, dangling references counted") {
  const Graph g = load_content_cites(kFixtures / "toy/toy.content", kFixtures / "toy/toy.cites");
  CHECK(g.num_nodes == 30);
  CHECK(g.num_features == 12);
  CHECK(g.num_classes == 3);
  CHECK(g.label_names == std::vector<std::string>{"Alpha", "Beta", "Gamma"});
  CHECK(g.labels[0] == 0);
  CHECK(g.labels[1] == 1);
  CHECK(g.dangling_edges == 1);

  TempDir d;
  const auto content = d.write("c", "x 1 zeta\ny 0 alpha\n");
  const auto cites = d.write("e", "x y\n");
  const Graph h = load_content_cites(content, cites);
  CHECK(h.labels == std::vector<int>{1, 0});
}

TEST_CASE("load_content_cites: malformed lines report the line number") {
  TempDir d;
  const auto cites = d.write("e", "");
  const auto bad_width = d.write("c1", "a 1 0 X\nb 1 X\n");
  try {
    load_content_cites(bad_width, cites);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  const auto bad_value = d.write("c2", "a 1 0 X\nb 1 q X\nc 0 0 X\n");
  try {
    load_content_cites(bad_value, cites);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("c2:2") != std::string::npos);
  }
  CHECK_THROWS_AS(load_content_cites(d.path / "missing", cites), IoError);
}

TEST_CASE("load_geomgcn_text: symmetric pairs collapse, header and range checks") {
  const Graph g = load_geomgcn_text(kFixtures / "geom/out1_graph_edges.txt",
                                    kFixtures / "geom/out1_node_feature_label.txt", "geom");
  CHECK(g.num_nodes == 15);
  CHECK(g.num_features == 4);
  CHECK(g.num_classes == 3);
  // Ring of 15 plus (1,3) listed in both directions.
  CHECK(g.edges.size() == 16);

  TempDir d;
  const auto feats = d.write("f", "node_id\tfeature\tlabel\n0\t1,0\t0\n1\t0,1\t1\n");
  const auto both = d.write("e", "node_id\tnode_id\n0\t1\n1\t0\n");
  CHECK(load_geomgcn_text(both, feats).edges == std::vector<Edge>{{0, 1}});

  const auto no_header = d.write("e2", "0\t1\n");
  CHECK_THROWS_AS(load_geomgcn_text(no_header, feats), ParseError);
  const auto out_of_range = d.write("e3", "node_id\tnode_id\n0\t2\n");
  try {
    load_geomgcn_text(out_of_range, feats);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  const auto feats_no_header = d.write("f2", "0\t1,0\t0\n1\t0,1\t1\n");
  CHECK_THROWS_AS(load_geomgcn_text(both, feats_no_header), ParseError);
}

TEST_CASE("normalize_adjacency: hand examples") {
  const Graph single = make_graph("s", Tensor::Ones(1, 1), {}, {0}, 1);
  CHECK(Tensor(normalize_adjacency(single).matrix) == Tensor::Ones(1, 1));

  const Graph path = tiny_graph(2, {{0, 1}}, {0, 0}, 1);
  CHECK(Tensor(normalize_adjacency(path).matrix) == Tensor::Constant(2, 2, 0.5));
}

TEST_CASE("normalize_adjacency: dense oracle, exact symmetry, positive diagonal") {
  Rng rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    const Index n = 40;
    std::vector<Edge> edges;
    for (int k = 0; k < 120; ++k) {
      edges.emplace_back(static_cast<Index>(rng.below(n)), static_cast<Index>(rng.below(n)));
    }
    std::vector<int> labels(static_cast<std::size_t>(n), 0);
    const Graph g = tiny_graph(n, edges, labels, 1);
    const Tensor sparse = Tensor(normalize_adjacency(g).matrix);
    const Tensor oracle = dense_normalized(n, g.edges);
    CHECK((sparse - oracle).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((sparse - sparse.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(sparse.diagonal().minCoeff() > 0.0);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    CHECK((sparse * ones - oracle * ones).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("generate_splits: proportions, partition, determinism") {
  std::vector<int> labels;
  for (int c = 0; c < 3; ++c) {
    for (int k = 0; k < 10 + 3 * c; ++k) labels.push_back(c);
  }
  const auto n = static_cast<Index>(labels.size());
  const Graph g = tiny_graph(n, {}, labels, 3);
  const SplitSet s = generate_splits(g, Rng(1));
  CHECK(s.size() == 10);
  for (const Split& sp : s.splits) {
    std::vector<int> count(static_cast<std::size_t>(n), 0);
    for (Index i : sp.train) ++count[static_cast<std::size_t>(i)];
    for (Index i : sp.val) ++count[static_cast<std::size_t>(i)];
    for (Index i : sp.test) ++count[static_cast<std::size_t>(i)];
    for (int c : count) CHECK(c == 1);
    // Class 0 has 10 nodes: 6/2/2. Class 2 has 16: floor 9.6 = 9, floor 3.2 = 3, rest 4.
    auto in_class = [&](const std::vector<Index>& v, int c) {
      return std::count_if(v.begin(), v.end(),
                           [&](Index i) { return labels[static_cast<std::size_t>(i)] == c; });
    };
    CHECK(in_class(sp.train, 0) == 6);
    CHECK(in_class(sp.val, 0) == 2);
    CHECK(in_class(sp.test, 0) == 2);
    CHECK(in_class(sp.train, 2) == 9);
    CHECK(in_class(sp.val, 2) == 3);
    CHECK(in_class(sp.test, 2) == 4);
    CHECK(std::is_sorted(sp.train.begin(), sp.train.end()));
  }
  CHECK(s.splits[0] != s.splits[1]);
  CHECK(generate_splits(g, Rng(1)) == s);
  CHECK(generate_splits(g, Rng(2)) != s);
}

TEST_CASE("generate_splits: small class rejected by name") {
  const Graph g = make_graph("g", Tensor::Ones(7, 1), {}, {0, 0, 0, 0, 0, 1, 1}, 2, {"big", "tiny"});
  try {
    generate_splits(g, Rng(1));
    FAIL("expected DatasetError");
  } catch (const DatasetError& e) {
    CHECK(std::string(e.what()).find("tiny") != std::string::npos);
  }
  SplitPolicy relaxed;
  relaxed.min_class_size = 1;
  CHECK(generate_splits(g, Rng(1), relaxed).size() == 10);
}

TEST_CASE("neutral format: round trip, triangle, empty features, truncated file") {
  TempDir d;
  const Graph g = load_content_cites(kFixtures / "toy/toy.content", kFixtures / "toy/toy.cites",
                                     "toy");
  write_neutral(g, d.path / "toy");
  const Graph back = read_neutral(d.path / "toy");
  CHECK(back.name == "toy");
  CHECK(back.edges == g.edges);
  CHECK(back.features == g.features);
  CHECK(back.labels == g.labels);
  CHECK(back.label_names == g.label_names);

  Rng rng(4);
  Tensor x(3, 2);
  for (Index k = 0; k < x.size(); ++k) x.data()[k] = rng.normal() / 3.0;
  const Graph tri = make_graph("tri", x, {{0, 1}, {1, 2}, {2, 0}}, {0, 1, 0}, 2);
  write_neutral(tri, d.path / "tri");
  const Graph tri_back = read_neutral(d.path / "tri");
  CHECK(tri_back.edges.size() == 3);
  CHECK(tri_back.features == x);

  Graph empty = tri;
  empty.features.resize(3, 0);
  empty.num_features = 0;
  CHECK_THROWS_AS(write_neutral(empty, d.path / "empty"), DatasetError);

  {
    std::ofstream f(d.path / "tri/features.tsv", std::ios::binary);
    f << "0.1\t0.2\n0.3\n";
  }
  try {
    read_neutral(d.path / "tri");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("dataset registry and resolution") {
  const DatasetInfo* cora = find_benchmark("cora");
  REQUIRE(cora != nullptr);
  CHECK(cora->nodes == 2708);
  CHECK(cora->features == 1433);
  CHECK(cora->classes == 7);
  const DatasetInfo* texas = find_benchmark("texas");
  REQUIRE(texas != nullptr);
  CHECK(texas->nodes == 183);
  CHECK(texas->raw_format == DatasetFormat::geomgcn);
  CHECK(find_benchmark("chameleon")->features == 2325);
  CHECK(find_benchmark("citeseer")->nodes == 3327);
  CHECK(benchmark_datasets().size() == 6);

  const DataSource src = resolve_dataset("/data", "cora");
  CHECK(src.format == DatasetFormat::content_cites);
  CHECK(src.primary == fs::path("/data/cora/cora.content"));
  CHECK(resolve_dataset("/data", "mygraph").format == DatasetFormat::neutral);
  try {
    load_graph(resolve_dataset("/nonexistent", "texas"));
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("/nonexistent/texas") != std::string::npos);
  }
}
