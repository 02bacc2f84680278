#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "csg2l/cslearn/losses.hpp"
#include "csg2l/encoders/model.hpp"
#include "csg2l/harness/run_config.hpp"

namespace csg {

/// Immutable per-dataset state shared by every run: the graph, its
/// normalized adjacency and (when a mode needs it) the rank-q factors.
struct GraphContext {
  std::shared_ptr<const Graph> graph;
  std::shared_ptr<const NormalizedAdjacency> adjacency;
  std::shared_ptr<const SvdFactors> factors;
  /// graph->features with exact zeros dropped.
  std::shared_ptr<const SparseMatrix> features;

  PropagationOperator original() const;
  /// Throws ParameterError when the factors were not computed.
  PropagationOperator low_rank() const;
};

/// Builds the context. Factors are computed when `svd` is set, with a
/// stream derived from `seed`.
GraphContext make_context(Graph g, const std::optional<SvdOptions>& svd, std::uint64_t seed);

/// Second contrastive view: operator plus the feature matrix it sees.
struct ContrastView {
  PropagationOperator op;
  std::shared_ptr<const SparseMatrix> features;
};

/// Sparse copy of a dense feature matrix; only exact zeros are dropped.
std::shared_ptr<const SparseMatrix> sparse_features(const Tensor& x);

/// What one training step optimizes.
struct ObjectiveSettings {
  TrainMode mode = TrainMode::full;
  double lambda = 0.1;
  double tau = 0.5;
  ConfidenceMode confidence = ConfidenceMode::threshold;
  double threshold = 0.8;
  Index per_class_top = 20;
  /// False during warm-up: the reweighted mode then uses unit weights.
  bool reweight = true;

  bool contrastive() const { return mode != TrainMode::baseline && lambda > 0.0; }
};

ObjectiveSettings objective_settings(const RunConfig& cfg, int epoch);

struct ObjectiveResult {
  Var loss;
  double ce = 0.0;
  /// Contrastive term; 0 when the branch is skipped.
  double cl = 0.0;
  /// Weights used in the contrastive term (unset when skipped).
  std::optional<PairWeights> weights;
  std::size_t confident = 0;
};

/// Records the joint training loss for one step on `tape`.
///
/// The original view is encoded once with `drop_h`; its logits feed both
/// cross-entropy and the pseudo-labels. With the contrastive branch active,
/// `view` is encoded with `drop_z` and both embeddings go through the
/// projection head. Pseudo-labels, confidence set and weights come from the
/// values of this same forward and carry no gradient. Passing `frozen`
/// replaces them with fixed weights (finite-difference checks need a loss
/// that is a smooth function of the parameters).
ObjectiveResult record_objective(Tape& tape, const Model& model, const PropagationOperator& op,
                                 const SparseMatrix& features, const ContrastView* view,
                                 const std::vector<int>& labels, std::span<const Index> train,
                                 const ObjectiveSettings& settings, Rng& drop_h, Rng& drop_z,
                                 const PairWeights* frozen = nullptr);

/// Argmax predictions of the original view without dropout.
std::vector<int> predict(const Model& model, const PropagationOperator& op,
                         const SparseMatrix& features);

/// Fraction of `rows` whose prediction equals the label; 0 for no rows.
double accuracy(const std::vector<int>& predicted, const std::vector<int>& labels,
                std::span<const Index> rows);

}  // namespace csg
