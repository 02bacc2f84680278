#pragma once

#include "csg2l/graphio/graph.hpp"
#include "csg2l/numkit/rng.hpp"

namespace csg {

/// Randomly perturbed view used by the "random augmentation" ablation.
struct RandomView {
  NormalizedAdjacency adjacency;
  Tensor features;
  std::size_t kept_edges = 0;
  std::size_t masked_columns = 0;
};

/// Drops each undirected edge with probability `edge_drop` (one draw per
/// edge, canonical order), then zeroes each feature column with
/// probability `feature_mask` (one draw per column), and renormalizes the
/// surviving adjacency.
RandomView random_augment(const Graph& g, double edge_drop, double feature_mask, Rng& rng);

}  // namespace csg
