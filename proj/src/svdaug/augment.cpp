#include "csg2l/svdaug/augment.hpp"

#include "csg2l/errors.hpp"

namespace csg {

RandomView random_augment(const Graph& g, double edge_drop, double feature_mask, Rng& rng) {
  if (!(edge_drop >= 0.0 && edge_drop < 1.0)) {
    throw ParameterError("random_augment: edge_drop must lie in [0, 1)");
  }
  if (!(feature_mask >= 0.0 && feature_mask < 1.0)) {
    throw ParameterError("random_augment: feature_mask must lie in [0, 1)");
  }
  RandomView view;
  std::vector<Edge> kept;
  kept.reserve(g.edges.size());
  for (const Edge& e : g.edges) {
    if (!rng.bernoulli(edge_drop)) kept.push_back(e);
  }
  view.kept_edges = kept.size();
  view.adjacency = normalize_adjacency(g.num_nodes, kept);

  view.features = g.features;
  for (Index c = 0; c < g.num_features; ++c) {
    if (rng.bernoulli(feature_mask)) {
      view.features.col(c).setZero();
      ++view.masked_columns;
    }
  }
  return view;
}

}  // namespace csg
