#pragma once

#include <functional>
#include <string>
#include <vector>

#include "csg2l/graphio/splits.hpp"
#include "csg2l/harness/objective.hpp"

namespace csg {

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double ce_loss = 0.0;
  double cl_loss = 0.0;
  std::size_t confident = 0;
  double val_acc = 0.0;
  double test_acc = 0.0;
};

struct RunMetrics {
  std::string dataset;
  EncoderKind encoder = EncoderKind::gcn;
  TrainMode mode = TrainMode::full;
  double lambda = 0.0;
  double weight_decay = 0.0;
  std::uint64_t seed = 0;
  std::size_t split = 0;

  std::vector<EpochRecord> epochs;
  /// 1-based epoch of maximum validation accuracy (earliest on ties); 0
  /// when no epoch completed.
  int best_epoch = 0;
  double val_acc = 0.0;
  /// Test accuracy at best_epoch.
  double test_acc = 0.0;
  double wall_ms = 0.0;
  bool failed = false;
  std::string failure;
};

/// Trains one model on one split. A non-finite loss stops the run and
/// marks it failed. When `best_parameters` is given it receives the
/// parameter snapshot taken at the best validation epoch.
RunMetrics train_run(const GraphContext& ctx, const Split& split, std::size_t split_index,
                     const RunConfig& cfg, double weight_decay,
                     std::vector<Tensor>* best_parameters = nullptr);

struct Aggregate {
  double mean = 0.0;
  /// Sample standard deviation (n - 1); 0 for fewer than two runs.
  double std = 0.0;
  std::size_t runs = 0;
  std::size_t failed = 0;
  bool complete() const { return failed == 0; }
};

/// Mean and spread of test accuracy over the successful runs.
Aggregate aggregate(const std::vector<RunMetrics>& runs);

struct MultiRunResult {
  RunConfig config;
  double weight_decay = 0.0;
  std::vector<RunMetrics> runs;
  Aggregate summary;
};

/// Calls `task(i)` for i in [0, n) on up to `jobs` threads. The first
/// exception thrown by any task is rethrown after all workers finish.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& task);

/// Weight decay with the highest best-validation accuracy on split 0
/// (earliest grid entry on ties), or the fixed value if one is configured.
double select_weight_decay(const GraphContext& ctx, const SplitSet& splits, const RunConfig& cfg,
                           int jobs = 1);

/// One run per split, seeds derived from cfg.seed and the split index.
MultiRunResult multi_run(const GraphContext& ctx, const SplitSet& splits, const RunConfig& cfg,
                         int jobs = 1);

/// All four modes over the same splits and seeds, in kAllModes order.
std::vector<MultiRunResult> ablation_suite(const GraphContext& ctx, const SplitSet& splits,
                                           const RunConfig& cfg, int jobs = 1);

inline const std::vector<double> kLambdaGrid = {0.01, 0.05, 0.1, 0.5, 1.0, 5.0};
inline constexpr double kDefaultLambda = 0.1;

struct SweepPoint {
  double lambda = 0.0;
  bool is_default = false;
  MultiRunResult result;
};

/// multi_run in full mode for each lambda, in the given order.
std::vector<SweepPoint> lambda_sweep(const GraphContext& ctx, const SplitSet& splits,
                                     const RunConfig& cfg,
                                     const std::vector<double>& values = kLambdaGrid,
                                     int jobs = 1);

}  // namespace csg
