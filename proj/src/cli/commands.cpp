#include "csg2l/cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "csg2l/errors.hpp"
#include "csg2l/graphio/datasets.hpp"
#include "csg2l/graphio/loaders.hpp"
#include "csg2l/graphio/neutral.hpp"
#include "csg2l/harness/gradcheck.hpp"
#include "csg2l/harness/metrics_io.hpp"
#include "csg2l/numkit/log.hpp"

namespace csg {
namespace {

struct Prepared {
  GraphContext ctx;
  SplitSet splits;
};

Prepared prepare(const CliConfig& cfg, bool need_svd) {
  validate_config(cfg);
  Graph g = load_graph(resolve_dataset(cfg.data_root, cfg.run.dataset));
  log_info("loaded " + g.name + ": " + std::to_string(g.num_nodes) + " nodes, " +
           std::to_string(g.num_features) + " features, " + std::to_string(g.num_classes) +
           " classes, " + std::to_string(g.edges.size()) + " undirected edges");
  SplitPolicy policy;
  policy.count = cfg.splits;
  policy.min_class_size = cfg.min_class_size;
  Prepared p;
  p.splits = generate_splits(g, Rng(cfg.run.seed).derive("splits"), policy);
  p.ctx = make_context(std::move(g), need_svd ? std::optional(cfg.run.svd) : std::nullopt,
                       cfg.run.seed);
  return p;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out.flush()) throw IoError("write failed: " + path.string());
}

void echo_config(const CliConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  write_text(cfg.out_dir / "config.ini", dump_config(cfg));
}

std::string pct(const Aggregate& a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f±%.2f", 100.0 * a.mean, 100.0 * a.std);
  return buf;
}

void print_table(std::ostream& out, const std::vector<SummaryRow>& rows,
                 const std::vector<const MultiRunResult*>& results) {
  char line[256];
  std::snprintf(line, sizeof line, "%-12s %-8s %-11s %8s %12s  %-14s %s\n", "dataset", "encoder",
                "mode", "lambda", "weight_decay", "test acc (%)", "runs");
  out << line;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const auto& a = results[i]->summary;
    std::snprintf(line, sizeof line, "%-12s %-8s %-11s %8g %12g  %-14s %zu/%zu%s%s\n",
                  r.dataset.c_str(), r.encoder.c_str(), r.mode.c_str(), r.lambda, r.weight_decay,
                  pct(a).c_str(), a.runs, a.runs + a.failed, a.complete() ? "" : " incomplete",
                  r.is_default ? "  (default)" : "");
    out << line;
  }
}

int persist(const CliConfig& cfg, std::ostream& out,
            const std::vector<const MultiRunResult*>& results,
            const std::vector<bool>& defaults = {}) {
  std::vector<RunMetrics> runs;
  std::vector<SummaryRow> rows;
  bool complete = true;
  for (std::size_t i = 0; i < results.size(); ++i) {
    runs.insert(runs.end(), results[i]->runs.begin(), results[i]->runs.end());
    rows.push_back(summary_row(*results[i], i < defaults.size() && defaults[i]));
    complete = complete && results[i]->summary.complete();
  }
  write_runs_csv(cfg.out_dir / "runs.csv", runs);
  write_epochs_csv(cfg.out_dir / "epochs.csv", runs);
  write_summary_json(cfg.out_dir / "summary.json", rows);
  print_table(out, rows, results);
  return complete ? kExitOk : kExitFailedRuns;
}

void write_matrix_tsv(const std::filesystem::path& path, const Tensor& m) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path.string());
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) f << (j ? "\t" : "") << format_double(m(i, j));
    f << '\n';
  }
  if (!f.flush()) throw IoError("write failed: " + path.string());
}

}  // namespace

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ParameterError& e) {
    err << "parameter error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitData;
  } catch (const IoError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const DatasetError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

int cmd_train(const CliConfig& cfg, std::ostream& out) {
  Prepared p = prepare(cfg, cfg.run.contrastive() && cfg.run.uses_svd());
  echo_config(cfg);
  const MultiRunResult r = multi_run(p.ctx, p.splits, cfg.run, cfg.jobs);
  return persist(cfg, out, {&r});
}

int cmd_ablate(const CliConfig& cfg, std::ostream& out) {
  Prepared p = prepare(cfg, true);
  echo_config(cfg);
  const auto results = ablation_suite(p.ctx, p.splits, cfg.run, cfg.jobs);
  std::vector<const MultiRunResult*> ptrs;
  for (const auto& r : results) ptrs.push_back(&r);
  return persist(cfg, out, ptrs);
}

int cmd_sweep(const CliConfig& cfg, std::ostream& out) {
  Prepared p = prepare(cfg, true);
  echo_config(cfg);
  const auto points = lambda_sweep(p.ctx, p.splits, cfg.run, cfg.sweep_lambdas, cfg.jobs);
  std::vector<const MultiRunResult*> ptrs;
  std::vector<bool> defaults;
  for (const auto& pt : points) {
    ptrs.push_back(&pt.result);
    defaults.push_back(pt.is_default);
  }
  write_curve_csv(cfg.out_dir / "curve.csv", points);
  return persist(cfg, out, ptrs, defaults);
}

int cmd_augment(const CliConfig& cfg, const std::filesystem::path& dump_dir, std::ostream& out) {
  validate_config(cfg);
  const Graph g = load_graph(resolve_dataset(cfg.data_root, cfg.run.dataset));
  const NormalizedAdjacency adj = normalize_adjacency(g);
  const SvdFactors f = approx_svd(adj, cfg.run.svd, Rng(cfg.run.seed).derive("svd"));

  std::filesystem::create_directories(dump_dir);
  write_matrix_tsv(dump_dir / "U.tsv", f.u);
  write_matrix_tsv(dump_dir / "S.tsv", Tensor(f.s));
  write_matrix_tsv(dump_dir / "V.tsv", f.v);

  nlohmann::ordered_json report;
  report["dataset"] = g.name;
  report["num_nodes"] = g.num_nodes;
  report["rank"] = f.rank();
  report["oversample"] = cfg.run.svd.oversample;
  report["power_iters"] = cfg.run.svd.power_iters;
  report["singular_values"] = std::vector<double>(f.s.data(), f.s.data() + f.s.size());
  const double err = reconstruction_error(adj.matrix, f);
  report["reconstruction_error"] = err;
  report["orthonormality_residual"] = orthonormality_residual(f);
  if (g.num_nodes <= kExactSvdLimit) {
    const Tensor dense = Tensor(adj.matrix);
    const double oracle = reconstruction_error(dense, exact_svd_oracle(dense, f.rank()));
    report["oracle_error"] = oracle;
    report["oracle_ratio"] = oracle > 1e-12 ? err / oracle : (err <= 1e-8 ? 1.0 : HUGE_VAL);
  }
  write_text(dump_dir / "report.json", report.dump(2) + "\n");

  out << "dataset " << g.name << ", M = " << g.num_nodes << ", q = " << f.rank() << '\n';
  out << "singular values:";
  for (Index k = 0; k < f.rank(); ++k) out << ' ' << format_double(f.s(k));
  out << '\n' << "reconstruction error " << format_double(err) << '\n';
  if (report.contains("oracle_ratio")) {
    out << "oracle error " << format_double(report["oracle_error"].get<double>()) << ", ratio "
        << format_double(report["oracle_ratio"].get<double>()) << '\n';
  }
  return kExitOk;
}

int cmd_gradcheck(std::ostream& out) {
  const GradcheckReport r = run_gradcheck();
  char line[256];
  for (const auto& c : r.cases) {
    std::snprintf(line, sizeof line,
                  "%-7s %-11s entries %4zu  |O| %2zu  max rel err %.3e  %s  (%s)\n",
                  std::string(to_string(c.encoder)).c_str(),
                  std::string(to_string(c.mode)).c_str(), c.entries, c.confident, c.max_rel_error,
                  c.max_rel_error < r.tolerance ? "ok" : "FAIL", c.worst.c_str());
    out << line;
  }
  std::snprintf(line, sizeof line, "step %g, tolerance %g, %.2f s\n", r.step, r.tolerance,
                r.seconds);
  out << line;
  return r.passed() ? kExitOk : kExitConfig;
}

int cmd_convert(const std::string& format, const std::vector<std::filesystem::path>& inputs,
                const std::filesystem::path& out_dir, const std::string& name,
                std::ostream& out) {
  const auto fmt = parse_dataset_format(format);
  if (!fmt || *fmt == DatasetFormat::neutral) {
    throw ConfigError("convert: format must be content_cites or geomgcn");
  }
  if (inputs.size() != 2) throw ConfigError("convert: expected two input files");
  const Graph g = *fmt == DatasetFormat::content_cites
                      ? load_content_cites(inputs[0], inputs[1], name)
                      : load_geomgcn_text(inputs[0], inputs[1], name);
  write_neutral(g, out_dir);
  out << g.name << ": " << g.num_nodes << " nodes, " << g.num_features << " features, "
      << g.num_classes << " classes, " << g.edges.size() << " edges";
  if (g.dangling_edges) out << ", " << g.dangling_edges << " dangling citations skipped";
  out << " -> " << out_dir.string() << '\n';
  return kExitOk;
}

}  // namespace csg
