#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "csg2l/harness/runner.hpp"

namespace csg {

/// One aggregate line of summary.json.
struct SummaryRow {
  std::string dataset;
  std::string encoder;
  std::string mode;
  double lambda = 0.0;
  double weight_decay = 0.0;
  double mean = 0.0;
  double std = 0.0;
  std::size_t runs = 0;
  std::size_t failed = 0;
  bool complete = true;
  bool is_default = false;

  bool operator==(const SummaryRow&) const = default;
};

SummaryRow summary_row(const MultiRunResult& r, bool is_default = false);

/// Header of runs.csv.
inline constexpr const char* kRunsCsvHeader =
    "dataset,encoder,mode,lambda,weight_decay,seed,split,best_epoch,val_acc,test_acc,status,"
    "wall_ms";

/// One row per run in the given order. Doubles use shortest round-trip
/// formatting so equal runs give byte-equal rows. Throws IoError.
void write_runs_csv(const std::filesystem::path& path, const std::vector<RunMetrics>& runs);

/// Per-epoch log: dataset, encoder, mode, lambda, split, epoch, losses and
/// accuracies.
void write_epochs_csv(const std::filesystem::path& path, const std::vector<RunMetrics>& runs);

void write_summary_json(const std::filesystem::path& path, const std::vector<SummaryRow>& rows);
/// Throws IoError or ParseError.
std::vector<SummaryRow> read_summary_json(const std::filesystem::path& path);

/// Accuracy-vs-lambda curve: lambda, mean, std, runs, default.
void write_curve_csv(const std::filesystem::path& path, const std::vector<SweepPoint>& points);

/// runs.csv row without the trailing wall-clock column.
std::string runs_csv_key(const std::string& row);

/// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace csg
