#pragma once

#include <string>
#include <vector>

#include "csg2l/harness/objective.hpp"

namespace csg {

/// Random connected-ish graph used by the gradient check and smoke tests.
Graph synthetic_graph(Index nodes, Index features, Index classes, std::uint64_t seed);

/// |a - n| / max(|a|, |n|, floor). The floor keeps entries whose true
/// gradient is near zero from dominating through round-off.
inline constexpr double kGradcheckFloor = 1e-6;
double gradcheck_relative_error(double analytic, double numeric);

struct GradcheckCase {
  EncoderKind encoder = EncoderKind::gcn;
  TrainMode mode = TrainMode::full;
  std::size_t entries = 0;
  std::size_t confident = 0;
  double max_rel_error = 0.0;
  std::string worst;
};

struct GradcheckReport {
  double step = 1e-5;
  double tolerance = 1e-4;
  double seconds = 0.0;
  std::vector<GradcheckCase> cases;

  bool passed() const;
};

/// Compares every parameter gradient of the full joint loss against
/// central differences, for each encoder and mode on a 12-node, 7-feature,
/// 3-class fixture. Dropout masks, the random view and the pair weights
/// are drawn once at the base point and held fixed across evaluations.
GradcheckReport run_gradcheck(double step = 1e-5, double tolerance = 1e-4,
                              std::uint64_t seed = 7);

/// Single case, exposed for tests.
GradcheckCase gradcheck_case(const Graph& g, EncoderKind encoder, TrainMode mode, double step,
                             std::uint64_t seed);

}  // namespace csg
