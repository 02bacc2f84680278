#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "csg2l/cli/config.hpp"

namespace csg {

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitData = 2,
  kExitFailedRuns = 3,
};

/// Runs `body`, printing any error to `err` and mapping it to an exit code:
/// configuration and parameter errors give 1, unreadable or malformed data
/// gives 2.
int guarded(std::ostream& err, const std::function<int()>& body);

// Each command writes its human-readable output to `out` and returns an
// exit code; errors propagate as exceptions (wrap with guarded()).

int cmd_train(const CliConfig& cfg, std::ostream& out);
int cmd_ablate(const CliConfig& cfg, std::ostream& out);
int cmd_sweep(const CliConfig& cfg, std::ostream& out);
/// Writes U.tsv, S.tsv, V.tsv and report.json into `dump_dir`.
int cmd_augment(const CliConfig& cfg, const std::filesystem::path& dump_dir, std::ostream& out);
int cmd_gradcheck(std::ostream& out);
/// `format` is content_cites or geomgcn; `inputs` holds the two raw files.
int cmd_convert(const std::string& format, const std::vector<std::filesystem::path>& inputs,
                const std::filesystem::path& out_dir, const std::string& name,
                std::ostream& out);

}  // namespace csg
