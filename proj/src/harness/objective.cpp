#include "csg2l/harness/objective.hpp"

#include "csg2l/errors.hpp"
#include "csg2l/numkit/ops.hpp"

namespace csg {

PropagationOperator GraphContext::original() const {
  return PropagationOperator::explicit_adjacency(adjacency);
}

PropagationOperator GraphContext::low_rank() const {
  if (!factors) throw ParameterError("low-rank view requested but no factors were computed");
  return PropagationOperator::factored(factors);
}

GraphContext make_context(Graph g, const std::optional<SvdOptions>& svd, std::uint64_t seed) {
  GraphContext ctx;
  auto adj = std::make_shared<NormalizedAdjacency>(normalize_adjacency(g));
  if (svd) {
    ctx.factors = std::make_shared<SvdFactors>(approx_svd(*adj, *svd, Rng(seed).derive("svd")));
  }
  ctx.features = sparse_features(g.features);
  ctx.graph = std::make_shared<Graph>(std::move(g));
  ctx.adjacency = std::move(adj);
  return ctx;
}

std::shared_ptr<const SparseMatrix> sparse_features(const Tensor& x) {
  return std::make_shared<SparseMatrix>(x.sparseView());
}

ObjectiveSettings objective_settings(const RunConfig& cfg, int epoch) {
  ObjectiveSettings s;
  s.mode = cfg.mode;
  s.lambda = cfg.lambda;
  s.tau = cfg.tau;
  s.confidence = cfg.confidence_mode;
  s.threshold = cfg.threshold;
  s.per_class_top = cfg.per_class_top;
  s.reweight = epoch > cfg.warmup_epochs;
  return s;
}

ObjectiveResult record_objective(Tape& tape, const Model& model, const PropagationOperator& op,
                                 const SparseMatrix& features, const ContrastView* view,
                                 const std::vector<int>& labels, std::span<const Index> train,
                                 const ObjectiveSettings& settings, Rng& drop_h, Rng& drop_z,
                                 const PairWeights* frozen) {
  ObjectiveResult out;
  const Var h = model.encode(tape, op, features, drop_h, true);
  const Var logits = model.classify(tape, h);
  const Var ce = cross_entropy(logits, labels, train);
  out.ce = ce.value()(0, 0);
  if (!settings.contrastive()) {
    out.loss = ce;
    return out;
  }
  if (view == nullptr) throw ParameterError("contrastive mode needs a second view");

  const Var z = model.encode(tape, view->op, *view->features, drop_z, true);
  const Var gh = model.project(tape, h);
  const Var gz = model.project(tape, z);
  const Var s_hz = cosine_sim_matrix(gh, gz);
  const Var s_hh = cosine_sim_matrix(gh, gh);
  const Var s_zz = cosine_sim_matrix(gz, gz);

  if (frozen != nullptr) {
    out.weights = *frozen;
  } else if (settings.mode == TrainMode::full && settings.reweight) {
    const Tensor probs = row_softmax(logits.value());
    Confidence conf = settings.confidence == ConfidenceMode::threshold
                          ? select_confident(probs, settings.threshold)
                          : select_top_per_class(probs, settings.per_class_top);
    out.confident = conf.count();
    out.weights = PairWeights::from(
        build_pair_signals(s_hz.value(), s_hh.value(), s_zz.value(), std::move(conf)));
  } else {
    out.weights = PairWeights::ones(h.rows());
  }

  const Var cl = contrastive_objective(s_hz, s_hh, s_zz, *out.weights, settings.tau);
  out.cl = cl.value()(0, 0);
  out.loss = joint_loss(ce, cl, settings.lambda);
  return out;
}

std::vector<int> predict(const Model& model, const PropagationOperator& op,
                         const SparseMatrix& features) {
  Tape tape;
  Rng unused(0);
  const Var h = model.encode(tape, op, features, unused, false);
  const Tensor& logits = model.classify(tape, h).value();
  std::vector<int> pred(static_cast<std::size_t>(logits.rows()));
  for (Index i = 0; i < logits.rows(); ++i) {
    Index best = 0;
    logits.row(i).maxCoeff(&best);
    pred[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return pred;
}

double accuracy(const std::vector<int>& predicted, const std::vector<int>& labels,
                std::span<const Index> rows) {
  if (rows.empty()) return 0.0;
  std::size_t hit = 0;
  for (Index i : rows) {
    const auto k = static_cast<std::size_t>(i);
    if (predicted[k] == labels[k]) ++hit;
  }
  return static_cast<double>(hit) / static_cast<double>(rows.size());
}

}  // namespace csg
