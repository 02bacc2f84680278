#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "csg2l/encoders/model.hpp"
#include "csg2l/svdaug/svd.hpp"

namespace csg {

/// Training variants compared by the ablation study.
///   baseline    cross-entropy on the original graph only
///   random_aug  + plain InfoNCE against an edge-dropped/feature-masked view
///   wo_lgdl     + plain InfoNCE against the low-rank SVD view
///   full        + reweighted InfoNCE against the low-rank SVD view
enum class TrainMode { baseline, random_aug, wo_lgdl, full };

inline constexpr TrainMode kAllModes[] = {TrainMode::baseline, TrainMode::random_aug,
                                          TrainMode::wo_lgdl, TrainMode::full};

std::string_view to_string(TrainMode m);
std::optional<TrainMode> parse_train_mode(std::string_view s);

enum class ConfidenceMode { threshold, per_class_top };

std::string_view to_string(ConfidenceMode m);
std::optional<ConfidenceMode> parse_confidence_mode(std::string_view s);

inline const std::vector<double> kWeightDecayGrid = {1e-3, 5e-3, 5e-4, 5e-5, 5e-6};

struct RunConfig {
  std::string dataset;
  ModelConfig model;
  TrainMode mode = TrainMode::full;
  int epochs = 500;
  double lr = 0.05;
  /// Fixed value, or empty to select from weight_decay_grid by validation
  /// accuracy on the first split.
  std::optional<double> weight_decay;
  std::vector<double> weight_decay_grid = kWeightDecayGrid;
  double lambda = 0.1;
  double tau = 0.5;
  SvdOptions svd;
  double threshold = 0.8;
  ConfidenceMode confidence_mode = ConfidenceMode::threshold;
  Index per_class_top = 20;
  /// Epochs trained with plain weights before reweighting starts.
  int warmup_epochs = 0;
  double edge_drop = 0.2;
  double feature_mask = 0.3;
  std::uint64_t seed = 42;

  bool uses_svd() const { return mode == TrainMode::wo_lgdl || mode == TrainMode::full; }
  /// Contrastive branch active (mode other than baseline and lambda > 0).
  bool contrastive() const { return mode != TrainMode::baseline && lambda > 0.0; }

  /// Throws ParameterError on inconsistent values.
  void validate() const;
};

/// Seed of one run, derived from the config seed and the split index.
std::uint64_t run_seed(std::uint64_t seed, std::size_t split);

}  // namespace csg
