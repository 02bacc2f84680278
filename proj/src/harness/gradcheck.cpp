#include "csg2l/harness/gradcheck.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "csg2l/svdaug/augment.hpp"

namespace csg {

Graph synthetic_graph(Index nodes, Index features, Index classes, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<int> labels(static_cast<std::size_t>(nodes));
  for (Index i = 0; i < nodes; ++i) labels[static_cast<std::size_t>(i)] = static_cast<int>(i % classes);

  // Class-dependent mean plus noise, so the task is learnable but not trivial.
  Tensor centers(classes, features);
  for (Index c = 0; c < classes; ++c) {
    for (Index f = 0; f < features; ++f) centers(c, f) = rng.normal();
  }
  Tensor x(nodes, features);
  for (Index i = 0; i < nodes; ++i) {
    for (Index f = 0; f < features; ++f) x(i, f) = centers(i % classes, f) + 0.5 * rng.normal();
  }

  // A ring through each class plus a few random cross edges.
  std::vector<Edge> edges;
  for (Index i = 0; i + classes < nodes; ++i) edges.emplace_back(i, i + classes);
  for (Index k = 0; k < nodes / 2; ++k) {
    const auto a = static_cast<Index>(rng.below(static_cast<std::uint64_t>(nodes)));
    const auto b = static_cast<Index>(rng.below(static_cast<std::uint64_t>(nodes)));
    edges.emplace_back(a, b);
  }
  return make_graph("synthetic", std::move(x), edges, std::move(labels), classes);
}

double gradcheck_relative_error(double analytic, double numeric) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), kGradcheckFloor});
  return std::abs(analytic - numeric) / denom;
}

bool GradcheckReport::passed() const {
  return std::all_of(cases.begin(), cases.end(),
                     [&](const GradcheckCase& c) { return c.max_rel_error < tolerance; });
}

GradcheckCase gradcheck_case(const Graph& g, EncoderKind encoder, TrainMode mode, double step,
                             std::uint64_t seed) {
  const Rng base(seed);
  ModelConfig mc;
  mc.encoder.kind = encoder;
  mc.encoder.hidden = 6;
  mc.encoder.dropout = 0.3;
  mc.encoder.gpr_k = 3;
  Model model(mc, g.num_features, g.num_classes, base.derive("init"));

  // Move away from the zero biases and textbook initial values so no
  // pre-activation sits exactly on a ReLU kink.
  Rng jitter = base.derive("jitter");
  ParameterStore& store = model.store();
  for (std::size_t p = 0; p < store.size(); ++p) {
    for (Index k = 0; k < store[p].value.size(); ++k) {
      store[p].value.data()[k] += 0.1 * jitter.normal();
    }
  }

  const GraphContext ctx = make_context(g, SvdOptions{5, 4, 4}, seed);
  const PropagationOperator op = ctx.original();
  std::optional<ContrastView> view;
  if (mode == TrainMode::random_aug) {
    Rng aug = base.derive("augment");
    RandomView r = random_augment(g, 0.2, 0.3, aug);
    view = ContrastView{PropagationOperator::explicit_adjacency(
                            std::make_shared<NormalizedAdjacency>(std::move(r.adjacency))),
                        sparse_features(r.features)};
  } else if (mode != TrainMode::baseline) {
    view = ContrastView{ctx.low_rank(), ctx.features};
  }

  ObjectiveSettings settings;
  settings.mode = mode;
  settings.lambda = 0.5;
  settings.tau = 0.5;
  // Just above 1/C so the confidence set is non-trivial at initialization.
  settings.threshold = 0.34;

  std::vector<Index> train;
  for (Index i = 0; i < g.num_nodes / 2; ++i) train.push_back(i);

  const Rng drop_h0 = base.derive("dropout_h");
  const Rng drop_z0 = base.derive("dropout_z");
  const ContrastView* vp = view ? &*view : nullptr;

  GradcheckCase out;
  out.encoder = encoder;
  out.mode = mode;

  std::optional<PairWeights> frozen;
  {
    Tape tape;
    Rng dh = drop_h0, dz = drop_z0;
    ObjectiveResult r =
        record_objective(tape, model, op, *ctx.features, vp, g.labels, train, settings, dh, dz);
    frozen = r.weights;
    out.confident = r.confident;
  }
  const PairWeights* fw = frozen ? &*frozen : nullptr;

  auto loss_at = [&] {
    Tape tape;
    Rng dh = drop_h0, dz = drop_z0;
    return record_objective(tape, model, op, *ctx.features, vp, g.labels, train, settings, dh, dz, fw)
        .loss.value()(0, 0);
  };

  store.zero_grad();
  {
    Tape tape;
    Rng dh = drop_h0, dz = drop_z0;
    ObjectiveResult r =
        record_objective(tape, model, op, *ctx.features, vp, g.labels, train, settings, dh, dz, fw);
    tape.backward(r.loss);
  }

  for (std::size_t p = 0; p < store.size(); ++p) {
    Parameter& prm = store[p];
    for (Index k = 0; k < prm.value.size(); ++k) {
      double& v = prm.value.data()[k];
      const double saved = v;
      v = saved + step;
      const double up = loss_at();
      v = saved - step;
      const double down = loss_at();
      v = saved;
      const double numeric = (up - down) / (2.0 * step);
      const double err = gradcheck_relative_error(prm.grad.data()[k], numeric);
      ++out.entries;
      if (out.worst.empty() || err > out.max_rel_error) {
        out.max_rel_error = err;
        out.worst = prm.name + "[" + std::to_string(k) + "]";
      }
    }
  }
  return out;
}

GradcheckReport run_gradcheck(double step, double tolerance, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  GradcheckReport report;
  report.step = step;
  report.tolerance = tolerance;
  const Graph g = synthetic_graph(12, 7, 3, seed);
  for (EncoderKind e : {EncoderKind::gcn, EncoderKind::gin, EncoderKind::gprgnn}) {
    for (TrainMode m : kAllModes) report.cases.push_back(gradcheck_case(g, e, m, step, seed));
  }
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace csg
