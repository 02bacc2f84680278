// Command-line front end: train, ablate, sweep, augment, gradcheck,
// convert and config show-defaults.

#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "csg2l/cli/commands.hpp"
#include "csg2l/numkit/log.hpp"

namespace {

struct RunOptions {
  std::string config_path;
  std::vector<std::pair<std::string, std::string>> overrides;
  bool quiet = false;
};

void add_run_options(CLI::App* app, RunOptions& o) {
  app->add_option("--config", o.config_path, "INI config file");
  auto flag = [&](const char* name, const char* key, const char* help) {
    app->add_option_function<std::string>(
        name, [&o, key](const std::string& v) { o.overrides.emplace_back(key, v); }, help);
  };
  flag("--dataset", "data.dataset", "dataset name");
  flag("--data-root", "data.root", "directory holding one subdirectory per dataset");
  flag("--splits", "data.splits", "number of random splits");
  flag("--min-class-size", "data.min_class_size", "smallest class admitted by the splitter");
  flag("--encoder", "model.encoder", "gcn, gin or gprgnn");
  flag("--mode", "train.mode", "baseline, random_aug, wo_lgdl or full");
  flag("--epochs", "train.epochs", "training epochs per run");
  flag("--weight-decay", "train.weight_decay", "value, or auto to select by validation");
  flag("--seed", "train.seed", "base seed");
  flag("--jobs", "train.jobs", "parallel runs");
  flag("--lambda", "contrast.lambda", "contrastive loss weight");
  flag("--tau", "contrast.tau", "temperature");
  flag("--threshold", "contrast.threshold", "confidence threshold");
  flag("--rank", "svd.rank", "truncation rank");
  flag("--out", "output.dir", "output directory");
  app->add_flag("--quiet", o.quiet, "only print warnings to stderr");
}

csg::CliConfig resolve(const RunOptions& o) {
  csg::CliConfig cfg;
  if (!o.config_path.empty()) csg::load_config_file(cfg, o.config_path);
  for (const auto& [key, value] : o.overrides) csg::set_config_value(cfg, key, value);
  csg::set_log_level(o.quiet ? csg::LogLevel::warn : csg::LogLevel::info);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph contrastive learning with low-rank SVD views"};
  app.require_subcommand(1);

  RunOptions train_opts, ablate_opts, sweep_opts, augment_opts;
  auto* train = app.add_subcommand("train", "ten-split training and evaluation of one setting");
  add_run_options(train, train_opts);
  auto* ablate = app.add_subcommand("ablate", "all four training modes on shared splits");
  add_run_options(ablate, ablate_opts);
  auto* sweep = app.add_subcommand("sweep", "contrastive weight sweep in full mode");
  add_run_options(sweep, sweep_opts);
  auto* augment = app.add_subcommand("augment", "compute and dump the truncated SVD factors");
  add_run_options(augment, augment_opts);
  std::string dump_dir = "svd";
  augment->add_option("--dump", dump_dir, "directory for U.tsv, S.tsv, V.tsv and report.json");

  auto* gradcheck = app.add_subcommand("gradcheck", "finite-difference check of all gradients");

  auto* convert = app.add_subcommand("convert", "convert raw dataset files to the neutral format");
  std::string format;
  std::vector<std::string> inputs;
  std::string convert_out;
  std::string convert_name;
  convert->add_option("--format", format, "content_cites or geomgcn")->required();
  convert->add_option("--input", inputs, "the two raw files (content+cites or edges+features)")
      ->required()
      ->expected(2);
  convert->add_option("--out", convert_out, "output directory")->required();
  convert->add_option("--name", convert_name, "dataset name stored in meta.json");

  auto* config = app.add_subcommand("config", "configuration helpers");
  config->require_subcommand(1);
  auto* show_defaults = config->add_subcommand("show-defaults", "print every key with its default");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : csg::kExitConfig;
  }

  auto& out = std::cout;
  auto& err = std::cerr;
  if (*train) return csg::guarded(err, [&] { return csg::cmd_train(resolve(train_opts), out); });
  if (*ablate) return csg::guarded(err, [&] { return csg::cmd_ablate(resolve(ablate_opts), out); });
  if (*sweep) return csg::guarded(err, [&] { return csg::cmd_sweep(resolve(sweep_opts), out); });
  if (*augment) {
    return csg::guarded(err, [&] { return csg::cmd_augment(resolve(augment_opts), dump_dir, out); });
  }
  if (*gradcheck) return csg::guarded(err, [&] { return csg::cmd_gradcheck(out); });
  if (*convert) {
    return csg::guarded(err, [&] {
      std::vector<std::filesystem::path> paths(inputs.begin(), inputs.end());
      return csg::cmd_convert(format, paths, convert_out, convert_name, out);
    });
  }
  if (*show_defaults) {
    out << csg::dump_config(csg::CliConfig{});
    return 0;
  }
  return 0;
}
