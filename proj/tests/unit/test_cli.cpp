#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "csg2l/cli/commands.hpp"
#include "csg2l/errors.hpp"
#include "csg2l/harness/metrics_io.hpp"

using namespace csg;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("csg2l_cli_" + std::to_string(::getpid()) + "_" +
            std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

Result run_cli(const TempDir& dir, const std::string& args) {
  const fs::path out = dir.path / "stdout.txt", err = dir.path / "stderr.txt";
  const std::string cmd = std::string("\"") + CSG_CLI + "\" " + args + " >\"" + out.string() +
                          "\" 2>\"" + err.string() + "\"";
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

// Converts the toy fixture into <dir>/data/toy and returns the common flags.
std::string toy_setup(const TempDir& dir) {
  const fs::path fx = CSG_FIXTURES;
  const Result r = run_cli(dir, "convert --format content_cites --input \"" +
                                    (fx / "toy/toy.content").string() + "\" \"" +
                                    (fx / "toy/toy.cites").string() + "\" --out \"" +
                                    (dir.path / "data/toy").string() + "\" --name toy");
  REQUIRE(r.code == 0);
  return "--data-root \"" + (dir.path / "data").string() +
         "\" --dataset toy --splits 3 --epochs 15 --weight-decay 5e-4 --quiet";
}

}  // namespace

TEST_CASE("config: unknown keys, sections and bad values are rejected") {
  CliConfig cfg;
  CHECK_THROWS_AS(set_config_value(cfg, "train.nonsense", "1"), ConfigError);
  CHECK_THROWS_AS(set_config_value(cfg, "nosection", "1"), ConfigError);
  CHECK_THROWS_AS(set_config_value(cfg, "train.epochs", "many"), ConfigError);
  CHECK_THROWS_AS(set_config_value(cfg, "model.encoder", "gat"), ConfigError);
  CHECK_THROWS_AS(set_config_value(cfg, "train.mode", "half"), ConfigError);

  TempDir dir;
  std::ofstream(dir.path / "a.ini") << "[train]\nepochs = 7\n[bogus]\nx = 1\n";
  CHECK_THROWS_AS(load_config_file(cfg, dir.path / "a.ini"), ConfigError);
  std::ofstream(dir.path / "b.ini") << "[train]\nepocs = 7\n";
  CHECK_THROWS_AS(load_config_file(cfg, dir.path / "b.ini"), ConfigError);
}

TEST_CASE("config: values, auto weight decay, dump and reload") {
  CliConfig cfg;
  CHECK(cfg.run.dataset == "cora");
  CHECK(cfg.run.epochs == 500);
  CHECK(cfg.run.lr == 0.05);
  CHECK(cfg.run.tau == 0.5);
  CHECK(cfg.run.lambda == 0.1);
  CHECK(cfg.run.svd.rank == 5);
  CHECK(cfg.run.model.encoder.layers == 2);
  CHECK(cfg.run.model.encoder.hidden == 64);
  CHECK_FALSE(cfg.run.weight_decay.has_value());

  set_config_value(cfg, "model.encoder", "gprgnn");
  set_config_value(cfg, "train.weight_decay", "5e-5");
  set_config_value(cfg, "contrast.lambda", "0.5");
  set_config_value(cfg, "sweep.lambdas", "0.01, 5");
  CHECK(cfg.run.model.encoder.kind == EncoderKind::gprgnn);
  CHECK(cfg.run.weight_decay == 5e-5);
  CHECK(cfg.sweep_lambdas == std::vector<double>{0.01, 5.0});

  TempDir dir;
  std::ofstream(dir.path / "c.ini") << dump_config(cfg);
  CliConfig back;
  load_config_file(back, dir.path / "c.ini");
  CHECK(dump_config(back) == dump_config(cfg));
  set_config_value(back, "train.weight_decay", "auto");
  CHECK_FALSE(back.run.weight_decay.has_value());

  const std::string dumped = dump_config(CliConfig{});
  for (const auto& key : config_keys()) {
    const std::string leaf = key.substr(key.find('.') + 1);
    CHECK(dumped.find(leaf + " = ") != std::string::npos);
  }
}

TEST_CASE("config: range checks surface as config errors") {
  CliConfig cfg;
  cfg.run.svd.rank = 0;
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);
  cfg = CliConfig{};
  cfg.splits = 0;
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);
  std::ostringstream err;
  CHECK(guarded(err, [] () -> int { throw ParameterError("x"); }) == kExitConfig);
  CHECK(guarded(err, [] () -> int { throw IoError("x"); }) == kExitData);
  CHECK(guarded(err, [] () -> int { throw ParseError("f", 3, "x"); }) == kExitData);
}

TEST_CASE("cli: show-defaults, bad flags, missing dataset, invalid rank") {
  TempDir dir;
  Result r = run_cli(dir, "config show-defaults");
  CHECK(r.code == 0);
  CHECK(r.out.find("[train]") != std::string::npos);
  CHECK(r.out.find("lambda = 0.1") != std::string::npos);

  CHECK(run_cli(dir, "train --no-such-flag").code == 1);
  CHECK(run_cli(dir, "").code == 1);

  const std::string missing = (dir.path / "nowhere").string();
  r = run_cli(dir, "train --quiet --data-root \"" + missing + "\" --dataset cora");
  CHECK(r.code == 2);
  CHECK(r.err.find(missing) != std::string::npos);

  r = run_cli(dir, "augment --data-root \"" + missing + "\" --rank 0");
  CHECK(r.code == 1);

  std::ofstream(dir.path / "bad.ini") << "[train]\nunknown = 3\n";
  r = run_cli(dir, "train --config \"" + (dir.path / "bad.ini").string() + "\"");
  CHECK(r.code == 1);
  CHECK(r.err.find("unknown") != std::string::npos);
}

TEST_CASE("cli: convert writes a neutral dataset; truncated input exits 2 with a line number") {
  TempDir dir;
  toy_setup(dir);
  const auto meta = nlohmann::json::parse(slurp(dir.path / "data/toy/meta.json"));
  CHECK(meta.dump().find("30") != std::string::npos);

  const fs::path fx = CSG_FIXTURES;
  std::string content = slurp(fx / "toy/toy.content");
  content = content.substr(0, content.find('\n', content.find('\n') + 1) + 1) + "p9999\t1\t0\n";
  std::ofstream(dir.path / "cut.content") << content;
  const Result r = run_cli(dir, "convert --format content_cites --input \"" +
                                    (dir.path / "cut.content").string() + "\" \"" +
                                    (fx / "toy/toy.cites").string() + "\" --out \"" +
                                    (dir.path / "cut").string() + "\"");
  CHECK(r.code == 2);
  CHECK(r.err.find("cut.content:3:") != std::string::npos);
}

TEST_CASE("cli: train echoes the config and is deterministic") {
  TempDir dir;
  const std::string common = toy_setup(dir);
  const fs::path a = dir.path / "a", b = dir.path / "b";
  Result r = run_cli(dir, "train " + common + " --mode full --out \"" + a.string() + "\"");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("±") != std::string::npos);
  r = run_cli(dir, "train " + common + " --mode full --out \"" + b.string() + "\"");
  REQUIRE(r.code == 0);

  const auto ra = lines_of(slurp(a / "runs.csv")), rb = lines_of(slurp(b / "runs.csv"));
  REQUIRE(ra.size() == 4);
  REQUIRE(rb.size() == ra.size());
  for (std::size_t i = 0; i < ra.size(); ++i) CHECK(runs_csv_key(ra[i]) == runs_csv_key(rb[i]));
  CHECK(slurp(a / "epochs.csv") == slurp(b / "epochs.csv"));

  CliConfig echoed;
  load_config_file(echoed, a / "config.ini");
  CHECK(echoed.run.dataset == "toy");
  CHECK(echoed.run.epochs == 15);
  CHECK(echoed.splits == 3);
  CHECK(read_summary_json(a / "summary.json").size() == 1);
}

TEST_CASE("cli: zero lambda override reproduces the baseline epoch log") {
  TempDir dir;
  const std::string common = toy_setup(dir);
  const fs::path base = dir.path / "base", zero = dir.path / "zero";
  REQUIRE(run_cli(dir, "train " + common + " --mode baseline --out \"" + base.string() + "\"")
              .code == 0);
  REQUIRE(run_cli(dir, "train " + common + " --mode full --lambda 0 --out \"" + zero.string() +
                           "\"")
              .code == 0);
  auto tail = [](const std::string& line) {
    // Drop dataset, encoder, mode and lambda.
    std::size_t pos = 0;
    for (int i = 0; i < 4; ++i) pos = line.find(',', pos) + 1;
    return line.substr(pos);
  };
  const auto eb = lines_of(slurp(base / "epochs.csv")), ez = lines_of(slurp(zero / "epochs.csv"));
  REQUIRE(eb.size() == ez.size());
  REQUIRE(eb.size() == 1 + 3 * 15);
  for (std::size_t i = 1; i < eb.size(); ++i) CHECK(tail(eb[i]) == tail(ez[i]));
}

TEST_CASE("cli: ablate prints four rows; sweep writes six curve rows with the default marked") {
  TempDir dir;
  const std::string common = toy_setup(dir);
  const fs::path ab = dir.path / "ablate", sw = dir.path / "sweep";
  Result r = run_cli(dir, "ablate " + common + " --encoder gprgnn --out \"" + ab.string() + "\"");
  REQUIRE(r.code == 0);
  const auto table = lines_of(r.out);
  CHECK(table.size() == 5);
  CHECK(read_summary_json(ab / "summary.json").size() == 4);
  CHECK(lines_of(slurp(ab / "runs.csv")).size() == 1 + 4 * 3);

  r = run_cli(dir, "sweep " + common + " --out \"" + sw.string() + "\"");
  REQUIRE(r.code == 0);
  const auto curve = lines_of(slurp(sw / "curve.csv"));
  REQUIRE(curve.size() == 7);
  int defaults = 0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    if (curve[i].ends_with(",yes")) {
      ++defaults;
      CHECK(curve[i].starts_with("0.1,"));
    }
  }
  CHECK(defaults == 1);
  CHECK(r.out.find("(default)") != std::string::npos);
  const auto rows = read_summary_json(sw / "summary.json");
  CHECK(rows.size() == 6);
  CHECK(rows[2].is_default);
}

TEST_CASE("cli: augment dumps factors and an oracle-relative report") {
  TempDir dir;
  const std::string common = toy_setup(dir);
  const fs::path dump = dir.path / "svd";
  const Result r = run_cli(dir, "augment " + common + " --rank 5 --dump \"" + dump.string() + "\"");
  REQUIRE(r.code == 0);
  const auto s = lines_of(slurp(dump / "S.tsv"));
  REQUIRE(s.size() == 5);
  for (std::size_t k = 1; k < s.size(); ++k) CHECK(std::stod(s[k]) <= std::stod(s[k - 1]));
  CHECK(lines_of(slurp(dump / "U.tsv")).size() == 30);
  const auto report = nlohmann::json::parse(slurp(dump / "report.json"));
  CHECK(report["rank"] == 5);
  CHECK(report["oracle_ratio"].get<double>() <= 1.05);
}

TEST_CASE("cli: gradcheck exits 0") {
  TempDir dir;
  const Result r = run_cli(dir, "gradcheck");
  CHECK(r.code == 0);
  CHECK(lines_of(r.out).size() == 13);
}
