#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "csg2l/harness/run_config.hpp"

namespace csg {

/// Everything a command needs: the run configuration plus data location,
/// split protocol, parallelism and output directory.
struct CliConfig {
  RunConfig run;
  std::filesystem::path data_root = "data";
  int splits = 10;
  Index min_class_size = 5;
  int jobs = 1;
  std::filesystem::path out_dir = "out";
  std::vector<double> sweep_lambdas = {0.01, 0.05, 0.1, 0.5, 1.0, 5.0};

  CliConfig();
};

/// Sets `section.key` from its text form. Throws ConfigError for unknown
/// keys and unparsable values.
void set_config_value(CliConfig& cfg, const std::string& dotted_key, const std::string& value);

/// Reads an INI file (`[section]` headers, `key = value` lines, `;` or `#`
/// comments) on top of `cfg`. Unknown sections or keys are rejected.
void load_config_file(CliConfig& cfg, const std::filesystem::path& path);

/// All keys with their current values, in INI form. Feeding the output
/// back through load_config_file reproduces `cfg`.
std::string dump_config(const CliConfig& cfg);

/// Dotted names of all recognized keys, in dump order.
std::vector<std::string> config_keys();

/// Range checks beyond RunConfig::validate. Throws ConfigError.
void validate_config(const CliConfig& cfg);

}  // namespace csg
