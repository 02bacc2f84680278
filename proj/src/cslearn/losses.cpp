#include "csg2l/cslearn/losses.hpp"

#include <cmath>
#include <limits>

#include "csg2l/errors.hpp"
#include "csg2l/numkit/ops.hpp"

namespace csg {
namespace {

void check_inputs(const Tensor& hz, const Tensor& hh, const Tensor& zz, const PairWeights& w,
                  double tau) {
  if (!(tau > 0.0)) throw ParameterError("contrastive loss: temperature must be positive");
  const Index m = hz.rows();
  auto square = [m](const Tensor& t) { return t.rows() == m && t.cols() == m; };
  if (!square(hz) || !square(hh) || !square(zz) || !square(w.hz) || !square(w.hh) ||
      !square(w.zz)) {
    throw ShapeError("contrastive loss: all similarity and weight matrices must be " +
                     shape_str(m, m));
  }
}

/// One direction of the objective; row i of `cross` and `within` holds the
/// scaled exponents of anchor i and the positive is cross(i, i). The
/// diagonal of `within` is excluded. Writes softmax weights (minus the
/// indicator on the positive) into the gradient buffers when non-null.
Eigen::VectorXd direction(const Tensor& cross, Tensor within, Tensor* g_cross, Tensor* g_within) {
  within.diagonal().setConstant(-std::numeric_limits<double>::infinity());
  const Eigen::VectorXd mx = cross.rowwise().maxCoeff().cwiseMax(within.rowwise().maxCoeff());
  const Eigen::ArrayXXd e_cross = (cross.array().colwise() - mx.array()).exp();
  const Eigen::ArrayXXd e_within = (within.array().colwise() - mx.array()).exp();
  const Eigen::ArrayXd total = e_cross.rowwise().sum() + e_within.rowwise().sum();
  const Eigen::VectorXd lse = mx.array() + total.log();
  if (g_cross) {
    *g_cross = (e_cross.colwise() / total).matrix();
    g_cross->diagonal().array() -= 1.0;
    *g_within = (e_within.colwise() / total).matrix();
  }
  return lse - cross.diagonal();
}

}  // namespace

PairWeights PairWeights::ones(Index m) {
  return {Tensor::Ones(m, m), Tensor::Ones(m, m), Tensor::Ones(m, m)};
}

AnchorLosses infonce_anchor_losses(const Tensor& sim_hz, const Tensor& sim_hh,
                                   const Tensor& sim_zz, const PairWeights& w, double tau) {
  check_inputs(sim_hz, sim_hh, sim_zz, w, tau);
  AnchorLosses out;
  const Tensor cross = w.hz.cwiseProduct(sim_hz) / tau;
  out.h_anchor = direction(cross, w.hh.cwiseProduct(sim_hh) / tau, nullptr, nullptr);
  out.z_anchor = direction(cross.transpose(), w.zz.cwiseProduct(sim_zz) / tau, nullptr, nullptr);
  return out;
}

double contrastive_objective(const Tensor& sim_hz, const Tensor& sim_hh, const Tensor& sim_zz,
                             const PairWeights& w, double tau) {
  const AnchorLosses l = infonce_anchor_losses(sim_hz, sim_hh, sim_zz, w, tau);
  const auto m = static_cast<double>(sim_hz.rows());
  return (l.h_anchor.sum() + l.z_anchor.sum()) / (2.0 * m);
}

Var contrastive_objective(Var sim_hz, Var sim_hh, Var sim_zz, const PairWeights& w, double tau) {
  const Tensor& hz = sim_hz.value();
  const Tensor& hh = sim_hh.value();
  const Tensor& zz = sim_zz.value();
  check_inputs(hz, hh, zz, w, tau);
  const Index m = hz.rows();

  // Softmax weights are needed for the gradient; compute them once here.
  Tensor g_hz_h, g_hh, g_hz_z, g_zz;
  const Tensor cross = w.hz.cwiseProduct(hz) / tau;
  const Eigen::VectorXd lh = direction(cross, w.hh.cwiseProduct(hh) / tau, &g_hz_h, &g_hh);
  const Eigen::VectorXd lz =
      direction(cross.transpose(), w.zz.cwiseProduct(zz) / tau, &g_hz_z, &g_zz);

  Tensor out(1, 1);
  out(0, 0) = (lh.sum() + lz.sum()) / (2.0 * static_cast<double>(m));

  const double scale = 1.0 / (2.0 * static_cast<double>(m) * tau);
  Tensor d_hz = (g_hz_h + g_hz_z.transpose()).cwiseProduct(w.hz) * scale;
  Tensor d_hh = g_hh.cwiseProduct(w.hh) * scale;
  Tensor d_zz = g_zz.cwiseProduct(w.zz) * scale;

  return sim_hz.tape().record(
      std::move(out), {sim_hz, sim_hh, sim_zz},
      [sim_hz, sim_hh, sim_zz, d_hz = std::move(d_hz), d_hh = std::move(d_hh),
       d_zz = std::move(d_zz)](Tape& t, const Tensor& g) {
        const double up = g(0, 0);
        t.accumulate(sim_hz, d_hz * up);
        t.accumulate(sim_hh, d_hh * up);
        t.accumulate(sim_zz, d_zz * up);
      });
}

Var cross_entropy(Var logits, const std::vector<int>& labels, std::span<const Index> rows) {
  if (rows.empty()) throw ParameterError("cross_entropy: no rows selected");
  const Tensor& z = logits.value();
  if (static_cast<Index>(labels.size()) != z.rows()) {
    throw ShapeError("cross_entropy: " + std::to_string(labels.size()) + " labels for " +
                     shape_str(z));
  }
  const auto n = static_cast<double>(rows.size());
  Tensor grad = Tensor::Zero(z.rows(), z.cols());
  double total = 0.0;
  for (Index i : rows) {
    const int y = labels[static_cast<std::size_t>(i)];
    if (y < 0 || y >= z.cols()) throw ParameterError("cross_entropy: label out of range");
    const double mx = z.row(i).maxCoeff();
    const double lse = mx + std::log((z.row(i).array() - mx).exp().sum());
    total += lse - z(i, y);
    grad.row(i) = (z.row(i).array() - lse).exp().matrix() / n;
    grad(i, y) -= 1.0 / n;
  }
  Tensor out(1, 1);
  out(0, 0) = total / n;
  return logits.tape().record(std::move(out), {logits},
                              [logits, grad = std::move(grad)](Tape& t, const Tensor& g) {
                                t.accumulate(logits, grad * g(0, 0));
                              });
}

Var joint_loss(Var ce, Var cl, double lambda) {
  if (lambda < 0.0) throw ParameterError("joint_loss: lambda must be >= 0");
  return add(ce, scale(cl, lambda));
}

}  // namespace csg
