#include "csg2l/cslearn/signals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "csg2l/errors.hpp"

namespace csg {
namespace {

Eigen::VectorXd row_norms(const Tensor& a) { return a.rowwise().norm(); }

/// a b^T; when both are the same matrix only one triangle is computed.
Tensor gram(const Tensor& a, const Tensor& b) {
  if (&a != &b) return a * b.transpose();
  Tensor s = Tensor::Zero(a.rows(), a.rows());
  s.selfadjointView<Eigen::Lower>().rankUpdate(a);
  s.triangularView<Eigen::StrictlyUpper>() = s.transpose();
  return s;
}

}  // namespace

Tensor cosine_sim_matrix(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.cols()) {
    throw ShapeError("cosine_sim_matrix: " + shape_str(a) + " vs " + shape_str(b));
  }
  const Eigen::VectorXd na = row_norms(a);
  const Eigen::VectorXd nb = row_norms(b);
  Tensor denom = na * nb.transpose();
  denom.array() += kCosineEps;
  Tensor s = gram(a, b);
  s.array() /= denom.array();
  return s;
}

Var cosine_sim_matrix(Var a, Var b) {
  if (a.cols() != b.cols()) {
    throw ShapeError("cosine_sim_matrix: " + shape_str(a.value()) + " vs " +
                     shape_str(b.value()));
  }
  Tensor s = cosine_sim_matrix(a.value(), b.value());
  Tensor saved = s;
  return a.tape().record(std::move(s), {a, b}, [a, b, saved](Tape& t, const Tensor& g) {
    const Tensor& av = a.value();
    const Tensor& bv = b.value();
    const Eigen::VectorXd na = row_norms(av);
    const Eigen::VectorXd nb = row_norms(bv);
    Tensor denom = na * nb.transpose();
    denom.array() += kCosineEps;
    // W = G / D; the norm terms reuse W * S since N / D^2 = S / D.
    Tensor w = g;
    w.array() /= denom.array();
    const Tensor ws = w.cwiseProduct(saved);
    if (a.id() == b.id()) {
      // Both arguments are the same node: sum the two contributions so
      // only one product with the embeddings is needed.
      Tensor ga = (w + w.transpose()) * av;
      const Eigen::VectorXd c = ws * nb + ws.transpose() * na;
      for (Index i = 0; i < av.rows(); ++i) {
        if (na(i) > 0.0) ga.row(i) -= (c(i) / na(i)) * av.row(i);
      }
      if (a.requires_grad()) t.accumulate(a, ga);
      return;
    }
    if (a.requires_grad()) {
      Tensor ga = w * bv;
      const Eigen::VectorXd c = ws * nb;
      for (Index i = 0; i < av.rows(); ++i) {
        if (na(i) > 0.0) ga.row(i) -= (c(i) / na(i)) * av.row(i);
      }
      t.accumulate(a, ga);
    }
    if (b.requires_grad()) {
      Tensor gb = w.transpose() * av;
      const Eigen::VectorXd c = ws.transpose() * na;
      for (Index k = 0; k < bv.rows(); ++k) {
        if (nb(k) > 0.0) gb.row(k) -= (c(k) / nb(k)) * bv.row(k);
      }
      t.accumulate(b, gb);
    }
  });
}

std::size_t Confidence::count() const {
  return static_cast<std::size_t>(std::count(member.begin(), member.end(), true));
}

namespace {

int argmax_lowest(const Tensor& probs, Index i) {
  int best = 0;
  for (Index c = 1; c < probs.cols(); ++c) {
    if (probs(i, c) > probs(i, best)) best = static_cast<int>(c);
  }
  return best;
}

}  // namespace

Confidence select_confident(const Tensor& probs, double threshold) {
  Confidence conf;
  const auto m = static_cast<std::size_t>(probs.rows());
  conf.member.assign(m, false);
  conf.pseudo_label.assign(m, -1);
  for (Index i = 0; i < probs.rows(); ++i) {
    const int y = argmax_lowest(probs, i);
    if (probs(i, y) >= threshold) {
      conf.member[static_cast<std::size_t>(i)] = true;
      conf.pseudo_label[static_cast<std::size_t>(i)] = y;
    }
  }
  return conf;
}

Confidence select_top_per_class(const Tensor& probs, Index per_class) {
  if (per_class < 0) throw ParameterError("select_top_per_class: count must be >= 0");
  Confidence conf;
  const auto m = static_cast<std::size_t>(probs.rows());
  conf.member.assign(m, false);
  conf.pseudo_label.assign(m, -1);
  std::vector<std::vector<Index>> by_class(static_cast<std::size_t>(probs.cols()));
  for (Index i = 0; i < probs.rows(); ++i) {
    by_class[static_cast<std::size_t>(argmax_lowest(probs, i))].push_back(i);
  }
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    auto& nodes = by_class[c];
    const auto col = static_cast<Index>(c);
    std::stable_sort(nodes.begin(), nodes.end(),
                     [&](Index x, Index y) { return probs(x, col) > probs(y, col); });
    const std::size_t take = std::min(nodes.size(), static_cast<std::size_t>(per_class));
    for (std::size_t k = 0; k < take; ++k) {
      conf.member[static_cast<std::size_t>(nodes[k])] = true;
      conf.pseudo_label[static_cast<std::size_t>(nodes[k])] = static_cast<int>(c);
    }
  }
  return conf;
}

Tensor pair_label_matrix(const Confidence& conf) {
  const auto m = static_cast<Index>(conf.member.size());
  Tensor q = Tensor::Zero(m, m);
  std::vector<Index> in;
  for (Index i = 0; i < m; ++i) {
    if (conf.member[static_cast<std::size_t>(i)]) in.push_back(i);
  }
  for (Index i : in) {
    for (Index k : in) {
      if (conf.pseudo_label[static_cast<std::size_t>(i)] ==
          conf.pseudo_label[static_cast<std::size_t>(k)]) {
        q(i, k) = 1.0;
      }
    }
  }
  return q;
}

Tensor reweight_matrix(const Tensor& q, const Confidence& conf, const Tensor& sim,
                       bool include_diagonal) {
  const auto m = static_cast<Index>(conf.member.size());
  if (q.rows() != m || q.cols() != m || sim.rows() != m || sim.cols() != m) {
    throw ShapeError("reweight_matrix: expected " + shape_str(m, m) + " inputs");
  }
  Tensor r = Tensor::Ones(m, m);
  std::vector<Index> in;
  for (Index i = 0; i < m; ++i) {
    if (conf.member[static_cast<std::size_t>(i)]) in.push_back(i);
  }
  if (in.empty()) return r;

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (Index i : in) {
    for (Index k : in) {
      if (i == k && !include_diagonal) continue;
      lo = std::min(lo, sim(i, k));
      hi = std::max(hi, sim(i, k));
    }
  }
  const bool degenerate = !(hi > lo);
  for (Index i : in) {
    for (Index k : in) {
      double norm = degenerate ? 0.5 : (sim(i, k) - lo) / (hi - lo);
      if (i == k && !include_diagonal) norm = std::clamp(norm, 0.0, 1.0);
      r(i, k) = std::abs(q(i, k) - norm);
    }
  }
  return r;
}

PairSignals build_pair_signals(Tensor sim_hz, Tensor sim_hh, Tensor sim_zz, Confidence conf) {
  PairSignals s;
  s.q = pair_label_matrix(conf);
  s.r_hz = reweight_matrix(s.q, conf, sim_hz, true);
  s.r_hh = reweight_matrix(s.q, conf, sim_hh, false);
  s.r_zz = reweight_matrix(s.q, conf, sim_zz, false);
  s.sim_hz = std::move(sim_hz);
  s.sim_hh = std::move(sim_hh);
  s.sim_zz = std::move(sim_zz);
  s.confidence = std::move(conf);
  return s;
}

PairSignals unit_pair_signals(Tensor sim_hz, Tensor sim_hh, Tensor sim_zz) {
  const Index m = sim_hz.rows();
  Confidence none;
  none.member.assign(static_cast<std::size_t>(m), false);
  none.pseudo_label.assign(static_cast<std::size_t>(m), -1);
  return build_pair_signals(std::move(sim_hz), std::move(sim_hh), std::move(sim_zz),
                            std::move(none));
}

}  // namespace csg
