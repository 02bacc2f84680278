#pragma once

#include <vector>

#include "csg2l/numkit/tape.hpp"

namespace csg {

/// Denominator guard in cosine similarity.
inline constexpr double kCosineEps = 1e-12;

/// S_ik = <a_i, b_k> / (|a_i| |b_k| + kCosineEps).
Tensor cosine_sim_matrix(const Tensor& a, const Tensor& b);

/// Recorded variant; gradients flow to both a and b (which may be the same
/// Var).
Var cosine_sim_matrix(Var a, Var b);

/// High-confidence node set O with pseudo-labels Y (meaningful on O only).
struct Confidence {
  std::vector<bool> member;
  std::vector<int> pseudo_label;

  std::size_t count() const;
  bool empty() const { return count() == 0; }
};

/// O = {i : max_c P_ic >= threshold}; Y_i = argmax_c P_ic, ties to the
/// lowest class index.
Confidence select_confident(const Tensor& probs, double threshold);

/// Alternative selection: for each class, the `per_class` nodes predicted
/// as that class with the largest probability for it (ties by node index).
Confidence select_top_per_class(const Tensor& probs, Index per_class);

/// Q_ik = 1 when i, k are both in O and share a pseudo-label, else 0.
Tensor pair_label_matrix(const Confidence& conf);

/// R_ik = |Q_ik - Norm(sim_ik)| for i, k in O and 1 elsewhere. Norm is the
/// min-max normalization over the O x O entries of `sim` (off-diagonal only
/// when `include_diagonal` is false); a constant population maps to 0.5.
/// Diagonal entries outside the population use the clamped normalization.
Tensor reweight_matrix(const Tensor& q, const Confidence& conf, const Tensor& sim,
                       bool include_diagonal);

/// Per-step contrastive state. Weights carry no gradient.
struct PairSignals {
  Tensor sim_hz;
  Tensor sim_hh;
  Tensor sim_zz;
  Confidence confidence;
  Tensor q;
  Tensor r_hz;
  Tensor r_hh;
  Tensor r_zz;
};

/// Builds Q and the three weight matrices from similarity values. The
/// cross-view matrix normalizes over all O x O pairs (its diagonal holds
/// the positives); the within-view matrices over off-diagonal pairs.
PairSignals build_pair_signals(Tensor sim_hz, Tensor sim_hh, Tensor sim_zz, Confidence conf);

/// Signals with every weight equal to 1 (plain InfoNCE).
PairSignals unit_pair_signals(Tensor sim_hz, Tensor sim_hh, Tensor sim_zz);

}  // namespace csg
