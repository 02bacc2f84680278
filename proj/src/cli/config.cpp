#include "csg2l/cli/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <functional>
#include <sstream>

#include "csg2l/errors.hpp"
#include "csg2l/harness/metrics_io.hpp"

namespace csg {
namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const std::string& expected) {
  throw ConfigError("invalid value '" + value + "' for " + key + " (expected " + expected + ")");
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) bad_value(key, v, "a number");
  return out;
}

template <class Int>
Int to_int(const std::string& key, const std::string& v) {
  Int out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) bad_value(key, v, "an integer");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad_value(key, v, "true or false");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  if (out.empty()) bad_value(key, v, "a comma-separated list of numbers");
  return out;
}

std::string list_str(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s;
}

struct Key {
  const char* section;
  const char* name;
  std::function<void(CliConfig&, const std::string& key, const std::string&)> set;
  std::function<std::string(const CliConfig&)> get;
};

const std::vector<Key>& key_table() {
  using C = CliConfig;
  using S = const std::string&;
  static const std::vector<Key> keys = {
      {"data", "root", [](C& c, S, S v) { c.data_root = v; },
       [](const C& c) { return c.data_root.string(); }},
      {"data", "dataset", [](C& c, S, S v) { c.run.dataset = v; },
       [](const C& c) { return c.run.dataset; }},
      {"data", "splits", [](C& c, S k, S v) { c.splits = to_int<int>(k, v); },
       [](const C& c) { return std::to_string(c.splits); }},
      {"data", "min_class_size", [](C& c, S k, S v) { c.min_class_size = to_int<Index>(k, v); },
       [](const C& c) { return std::to_string(c.min_class_size); }},

      {"model", "encoder",
       [](C& c, S k, S v) {
         auto e = parse_encoder_kind(v);
         if (!e) bad_value(k, v, "gcn, gin or gprgnn");
         c.run.model.encoder.kind = *e;
       },
       [](const C& c) { return std::string(to_string(c.run.model.encoder.kind)); }},
      {"model", "layers", [](C& c, S k, S v) { c.run.model.encoder.layers = to_int<int>(k, v); },
       [](const C& c) { return std::to_string(c.run.model.encoder.layers); }},
      {"model", "hidden",
       [](C& c, S k, S v) { c.run.model.encoder.hidden = to_int<Index>(k, v); },
       [](const C& c) { return std::to_string(c.run.model.encoder.hidden); }},
      {"model", "dropout",
       [](C& c, S k, S v) { c.run.model.encoder.dropout = to_double(k, v); },
       [](const C& c) { return format_double(c.run.model.encoder.dropout); }},
      {"model", "bias", [](C& c, S k, S v) { c.run.model.encoder.bias = to_bool(k, v); },
       [](const C& c) { return std::string(c.run.model.encoder.bias ? "true" : "false"); }},
      {"model", "classifier_layers",
       [](C& c, S k, S v) { c.run.model.classifier_layers = to_int<int>(k, v); },
       [](const C& c) { return std::to_string(c.run.model.classifier_layers); }},
      {"model", "gpr_k", [](C& c, S k, S v) { c.run.model.encoder.gpr_k = to_int<int>(k, v); },
       [](const C& c) { return std::to_string(c.run.model.encoder.gpr_k); }},
      {"model", "gpr_alpha",
       [](C& c, S k, S v) { c.run.model.encoder.gpr_alpha = to_double(k, v); },
       [](const C& c) { return format_double(c.run.model.encoder.gpr_alpha); }},
      {"model", "gin_eps",
       [](C& c, S k, S v) { c.run.model.encoder.gin_eps = to_double(k, v); },
       [](const C& c) { return format_double(c.run.model.encoder.gin_eps); }},

      {"train", "mode",
       [](C& c, S k, S v) {
         auto m = parse_train_mode(v);
         if (!m) bad_value(k, v, "baseline, random_aug, wo_lgdl or full");
         c.run.mode = *m;
       },
       [](const C& c) { return std::string(to_string(c.run.mode)); }},
      {"train", "epochs", [](C& c, S k, S v) { c.run.epochs = to_int<int>(k, v); },
       [](const C& c) { return std::to_string(c.run.epochs); }},
      {"train", "lr", [](C& c, S k, S v) { c.run.lr = to_double(k, v); },
       [](const C& c) { return format_double(c.run.lr); }},
      {"train", "weight_decay",
       [](C& c, S k, S v) {
         if (v == "auto") {
           c.run.weight_decay.reset();
         } else {
           c.run.weight_decay = to_double(k, v);
         }
       },
       [](const C& c) {
         return c.run.weight_decay ? format_double(*c.run.weight_decay) : std::string("auto");
       }},
      {"train", "weight_decay_grid",
       [](C& c, S k, S v) { c.run.weight_decay_grid = to_list(k, v); },
       [](const C& c) { return list_str(c.run.weight_decay_grid); }},
      {"train", "warmup", [](C& c, S k, S v) { c.run.warmup_epochs = to_int<int>(k, v); },
       [](const C& c) { return std::to_string(c.run.warmup_epochs); }},
      {"train", "seed", [](C& c, S k, S v) { c.run.seed = to_int<std::uint64_t>(k, v); },
       [](const C& c) { return std::to_string(c.run.seed); }},
      {"train", "jobs", [](C& c, S k, S v) { c.jobs = to_int<int>(k, v); },
       [](const C& c) { return std::to_string(c.jobs); }},

      {"contrast", "lambda", [](C& c, S k, S v) { c.run.lambda = to_double(k, v); },
       [](const C& c) { return format_double(c.run.lambda); }},
      {"contrast", "tau", [](C& c, S k, S v) { c.run.tau = to_double(k, v); },
       [](const C& c) { return format_double(c.run.tau); }},
      {"contrast", "threshold", [](C& c, S k, S v) { c.run.threshold = to_double(k, v); },
       [](const C& c) { return format_double(c.run.threshold); }},
      {"contrast", "confidence",
       [](C& c, S k, S v) {
         auto m = parse_confidence_mode(v);
         if (!m) bad_value(k, v, "threshold or per_class_top");
         c.run.confidence_mode = *m;
       },
       [](const C& c) { return std::string(to_string(c.run.confidence_mode)); }},
      {"contrast", "per_class_top",
       [](C& c, S k, S v) { c.run.per_class_top = to_int<Index>(k, v); },
       [](const C& c) { return std::to_string(c.run.per_class_top); }},
      {"contrast", "edge_drop", [](C& c, S k, S v) { c.run.edge_drop = to_double(k, v); },
       [](const C& c) { return format_double(c.run.edge_drop); }},
      {"contrast", "feature_mask", [](C& c, S k, S v) { c.run.feature_mask = to_double(k, v); },
       [](const C& c) { return format_double(c.run.feature_mask); }},

      {"svd", "rank", [](C& c, S k, S v) { c.run.svd.rank = to_int<Index>(k, v); },
       [](const C& c) { return std::to_string(c.run.svd.rank); }},
      {"svd", "oversample", [](C& c, S k, S v) { c.run.svd.oversample = to_int<Index>(k, v); },
       [](const C& c) { return std::to_string(c.run.svd.oversample); }},
      {"svd", "power_iters", [](C& c, S k, S v) { c.run.svd.power_iters = to_int<int>(k, v); },
       [](const C& c) { return std::to_string(c.run.svd.power_iters); }},

      {"sweep", "lambdas", [](C& c, S k, S v) { c.sweep_lambdas = to_list(k, v); },
       [](const C& c) { return list_str(c.sweep_lambdas); }},

      {"output", "dir", [](C& c, S, S v) { c.out_dir = v; },
       [](const C& c) { return c.out_dir.string(); }},
  };
  return keys;
}

const Key* find_key(const std::string& dotted) {
  for (const auto& k : key_table()) {
    if (dotted == std::string(k.section) + "." + k.name) return &k;
  }
  return nullptr;
}

}  // namespace

CliConfig::CliConfig() { run.dataset = "cora"; }

void set_config_value(CliConfig& cfg, const std::string& dotted_key, const std::string& value) {
  const Key* k = find_key(dotted_key);
  if (!k) throw ConfigError("unknown config key: " + dotted_key);
  k->set(cfg, dotted_key, trim(value));
}

void load_config_file(CliConfig& cfg, const std::filesystem::path& path) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    if (!std::filesystem::exists(path)) throw ConfigError("cannot open config file: " + path.string());
    throw ConfigError(path.string() + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError(path.string() + ": key '" + section + "' outside a section");
    for (const auto& [key, node] : body) {
      try {
        set_config_value(cfg, section + "." + key, node.data());
      } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
      }
    }
  }
}

std::string dump_config(const CliConfig& cfg) {
  std::ostringstream out;
  std::string current;
  for (const auto& k : key_table()) {
    if (current != k.section) {
      if (!current.empty()) out << '\n';
      current = k.section;
      out << '[' << current << "]\n";
    }
    out << k.name << " = " << k.get(cfg) << '\n';
  }
  return out.str();
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& k : key_table()) out.push_back(std::string(k.section) + "." + k.name);
  return out;
}

void validate_config(const CliConfig& cfg) {
  if (cfg.run.dataset.empty()) throw ConfigError("data.dataset is empty");
  if (cfg.splits < 1) throw ConfigError("data.splits must be >= 1");
  if (cfg.min_class_size < 1) throw ConfigError("data.min_class_size must be >= 1");
  if (cfg.jobs < 1) throw ConfigError("train.jobs must be >= 1");
  if (cfg.run.model.classifier_layers < 1 || cfg.run.model.classifier_layers > 2) {
    throw ConfigError("model.classifier_layers must be 1 or 2");
  }
  for (double l : cfg.sweep_lambdas) {
    if (l < 0.0) throw ConfigError("sweep.lambdas must be >= 0");
  }
  try {
    cfg.run.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace csg
