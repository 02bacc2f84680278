#pragma once

#include <span>
#include <vector>

#include "csg2l/cslearn/signals.hpp"

namespace csg {

/// Weight matrices applied to the critic inside each exponent. All ones
/// gives plain InfoNCE.
struct PairWeights {
  Tensor hz;
  Tensor hh;
  Tensor zz;

  static PairWeights ones(Index m);
  static PairWeights from(const PairSignals& s) { return {s.r_hz, s.r_hh, s.r_zz}; }
};

/// Per-anchor reweighted InfoNCE in both directions.
///   h_anchor[i] = -log e^{w th(h_i,z_i)/tau} /
///                 (e^{w th(h_i,z_i)/tau} + sum_{k!=i} e^{w th(h_i,z_k)/tau}
///                                       + sum_{k!=i} e^{w th(h_i,h_k)/tau})
/// with th(h_i,z_k) = sim_hz(i,k), th(h_i,h_k) = sim_hh(i,k) and w the
/// matching weight. z_anchor mirrors it with th(z_i,h_k) = sim_hz(k,i)
/// (weights hz transposed) and th(z_i,z_k) = sim_zz(i,k).
struct AnchorLosses {
  Eigen::VectorXd h_anchor;
  Eigen::VectorXd z_anchor;
};

AnchorLosses infonce_anchor_losses(const Tensor& sim_hz, const Tensor& sim_hh,
                                   const Tensor& sim_zz, const PairWeights& w, double tau);

/// Mean of both directions over all anchors: (1/2M) sum_i [l(h_i,z_i) + l(z_i,h_i)].
double contrastive_objective(const Tensor& sim_hz, const Tensor& sim_hh, const Tensor& sim_zz,
                             const PairWeights& w, double tau);

/// Recorded variant; gradients flow into the three similarity matrices,
/// the weights are constants.
Var contrastive_objective(Var sim_hz, Var sim_hh, Var sim_zz, const PairWeights& w, double tau);

/// Mean negative log-likelihood of `labels` over the rows in `rows`,
/// computed from logits with log-sum-exp. Throws ParameterError when
/// `rows` is empty.
Var cross_entropy(Var logits, const std::vector<int>& labels, std::span<const Index> rows);

/// L = ce + lambda * cl.
Var joint_loss(Var ce, Var cl, double lambda);

}  // namespace csg
