#include "csg2l/harness/run_config.hpp"

#include "csg2l/errors.hpp"
#include "csg2l/numkit/rng.hpp"

namespace csg {

std::string_view to_string(TrainMode m) {
  switch (m) {
    case TrainMode::baseline: return "baseline";
    case TrainMode::random_aug: return "random_aug";
    case TrainMode::wo_lgdl: return "wo_lgdl";
    case TrainMode::full: return "full";
  }
  return "?";
}

std::optional<TrainMode> parse_train_mode(std::string_view s) {
  for (TrainMode m : kAllModes) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

std::string_view to_string(ConfidenceMode m) {
  return m == ConfidenceMode::threshold ? "threshold" : "per_class_top";
}

std::optional<ConfidenceMode> parse_confidence_mode(std::string_view s) {
  if (s == "threshold") return ConfidenceMode::threshold;
  if (s == "per_class_top") return ConfidenceMode::per_class_top;
  return std::nullopt;
}

void RunConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ParameterError(msg); };
  if (epochs < 1) fail("epochs must be >= 1");
  if (!(lr > 0.0)) fail("lr must be positive");
  if (weight_decay && *weight_decay < 0.0) fail("weight_decay must be >= 0");
  if (!weight_decay && weight_decay_grid.empty()) fail("weight_decay grid is empty");
  if (lambda < 0.0) fail("lambda must be >= 0");
  if (!(tau > 0.0)) fail("tau must be positive");
  if (svd.rank < 1) fail("rank must be >= 1");
  if (svd.oversample < 0) fail("oversample must be >= 0");
  if (svd.power_iters < 0) fail("power_iters must be >= 0");
  if (!(threshold > 0.0 && threshold <= 1.0)) fail("threshold must lie in (0, 1]");
  if (per_class_top < 0) fail("per_class_top must be >= 0");
  if (warmup_epochs < 0) fail("warmup must be >= 0");
  if (!(edge_drop >= 0.0 && edge_drop < 1.0)) fail("edge_drop must lie in [0, 1)");
  if (!(feature_mask >= 0.0 && feature_mask < 1.0)) fail("feature_mask must lie in [0, 1)");
  const auto& e = model.encoder;
  if (e.layers < 1) fail("layers must be >= 1");
  if (e.hidden < 1) fail("hidden must be >= 1");
  if (!(e.dropout >= 0.0 && e.dropout < 1.0)) fail("dropout must lie in [0, 1)");
  if (e.gpr_k < 0) fail("gpr_k must be >= 0");
  if (!(e.gpr_alpha > 0.0 && e.gpr_alpha <= 1.0)) fail("gpr_alpha must lie in (0, 1]");
}

std::uint64_t run_seed(std::uint64_t seed, std::size_t split) {
  return mix_seed(seed ^ mix_seed(0x5eed0000ULL + split));
}

}  // namespace csg
