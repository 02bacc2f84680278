#include "csg2l/harness/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "csg2l/errors.hpp"
#include "csg2l/numkit/adam.hpp"
#include "csg2l/numkit/log.hpp"
#include "csg2l/svdaug/augment.hpp"

namespace csg {

RunMetrics train_run(const GraphContext& ctx, const Split& split, std::size_t split_index,
                     const RunConfig& cfg, double weight_decay,
                     std::vector<Tensor>* best_parameters) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const Graph& g = *ctx.graph;

  RunMetrics m;
  m.dataset = cfg.dataset.empty() ? g.name : cfg.dataset;
  m.encoder = cfg.model.encoder.kind;
  m.mode = cfg.mode;
  m.lambda = cfg.mode == TrainMode::baseline ? 0.0 : cfg.lambda;
  m.weight_decay = weight_decay;
  m.seed = cfg.seed;
  m.split = split_index;

  const Rng base(run_seed(cfg.seed, split_index));
  Model model(cfg.model, g.num_features, g.num_classes, base.derive("init"));
  Rng drop_h = base.derive("dropout_h");
  Rng drop_z = base.derive("dropout_z");
  Rng aug = base.derive("augment");

  AdamConfig ac;
  ac.lr = cfg.lr;
  ac.weight_decay = weight_decay;
  Adam opt(model.store().list(), ac);

  const PropagationOperator op = ctx.original();
  const SparseMatrix& features = *ctx.features;
  std::optional<ContrastView> svd_view;
  if (cfg.contrastive() && cfg.uses_svd()) svd_view = ContrastView{ctx.low_rank(), ctx.features};

  double best_val = -1.0;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::optional<ContrastView> random_view;
    if (cfg.contrastive() && cfg.mode == TrainMode::random_aug) {
      RandomView r = random_augment(g, cfg.edge_drop, cfg.feature_mask, aug);
      random_view = ContrastView{
          PropagationOperator::explicit_adjacency(
              std::make_shared<NormalizedAdjacency>(std::move(r.adjacency))),
          sparse_features(r.features)};
    }
    const ContrastView* view = svd_view ? &*svd_view : (random_view ? &*random_view : nullptr);

    Tape tape;
    opt.zero_grad();
    const ObjectiveResult res =
        record_objective(tape, model, op, features, view, g.labels, split.train,
                         objective_settings(cfg, epoch), drop_h, drop_z);
    const double loss = res.loss.value()(0, 0);
    if (!std::isfinite(loss)) {
      m.failed = true;
      m.failure = "non-finite loss at epoch " + std::to_string(epoch);
      log_warn(m.dataset + " split " + std::to_string(split_index) + ": " + m.failure);
      break;
    }
    tape.backward(res.loss);
    opt.step();

    const std::vector<int> pred = predict(model, op, features);
    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss;
    rec.ce_loss = res.ce;
    rec.cl_loss = res.cl;
    rec.confident = res.confident;
    rec.val_acc = accuracy(pred, g.labels, split.val);
    rec.test_acc = accuracy(pred, g.labels, split.test);
    m.epochs.push_back(rec);
    if (rec.val_acc > best_val) {
      best_val = rec.val_acc;
      m.best_epoch = epoch;
      m.val_acc = rec.val_acc;
      m.test_acc = rec.test_acc;
      if (best_parameters) *best_parameters = model.store().snapshot();
    }
  }
  m.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                  .count();
  return m;
}

Aggregate aggregate(const std::vector<RunMetrics>& runs) {
  Aggregate a;
  std::vector<double> acc;
  for (const auto& r : runs) {
    if (r.failed) {
      ++a.failed;
    } else {
      acc.push_back(r.test_acc);
    }
  }
  a.runs = acc.size();
  if (acc.empty()) return a;
  // Shifted by the first value so identical runs give exactly zero spread.
  const double shift = acc.front();
  double total = 0.0;
  for (double v : acc) total += v - shift;
  const double offset = total / static_cast<double>(acc.size());
  a.mean = shift + offset;
  if (acc.size() > 1) {
    double sq = 0.0;
    for (double v : acc) sq += (v - shift - offset) * (v - shift - offset);
    a.std = std::sqrt(sq / static_cast<double>(acc.size() - 1));
  }
  return a;
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& task) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

double select_weight_decay(const GraphContext& ctx, const SplitSet& splits, const RunConfig& cfg,
                           int jobs) {
  if (cfg.weight_decay) return *cfg.weight_decay;
  if (splits.size() == 0) throw ParameterError("weight decay selection needs at least one split");
  const auto& grid = cfg.weight_decay_grid;
  std::vector<RunMetrics> trials(grid.size());
  parallel_for(grid.size(), jobs,
               [&](std::size_t i) { trials[i] = train_run(ctx, splits[0], 0, cfg, grid[i]); });
  std::size_t best = 0;
  double best_val = -1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!trials[i].failed && trials[i].val_acc > best_val) {
      best_val = trials[i].val_acc;
      best = i;
    }
  }
  std::ostringstream msg;
  msg << (cfg.dataset.empty() ? ctx.graph->name : cfg.dataset) << " "
      << to_string(cfg.model.encoder.kind) << " " << to_string(cfg.mode)
      << ": selected weight_decay " << grid[best] << " (val " << best_val << " on split 0)";
  log_info(msg.str());
  return grid[best];
}

MultiRunResult multi_run(const GraphContext& ctx, const SplitSet& splits, const RunConfig& cfg,
                         int jobs) {
  cfg.validate();
  MultiRunResult out;
  out.config = cfg;
  out.weight_decay = select_weight_decay(ctx, splits, cfg, jobs);
  out.runs.resize(splits.size());
  parallel_for(splits.size(), jobs, [&](std::size_t i) {
    out.runs[i] = train_run(ctx, splits[i], i, cfg, out.weight_decay);
  });
  out.summary = aggregate(out.runs);
  if (!out.summary.complete()) {
    log_warn(std::to_string(out.summary.failed) + " of " + std::to_string(splits.size()) +
             " runs failed; aggregate is incomplete");
  }
  return out;
}

std::vector<MultiRunResult> ablation_suite(const GraphContext& ctx, const SplitSet& splits,
                                           const RunConfig& cfg, int jobs) {
  std::vector<MultiRunResult> out;
  for (TrainMode mode : kAllModes) {
    RunConfig c = cfg;
    c.mode = mode;
    out.push_back(multi_run(ctx, splits, c, jobs));
  }
  return out;
}

std::vector<SweepPoint> lambda_sweep(const GraphContext& ctx, const SplitSet& splits,
                                     const RunConfig& cfg, const std::vector<double>& values,
                                     int jobs) {
  std::vector<SweepPoint> out;
  for (double lambda : values) {
    RunConfig c = cfg;
    c.mode = TrainMode::full;
    c.lambda = lambda;
    SweepPoint p;
    p.lambda = lambda;
    p.is_default = lambda == kDefaultLambda;
    p.result = multi_run(ctx, splits, c, jobs);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace csg
