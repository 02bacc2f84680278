#include "csg2l/encoders/encoder.hpp"

#include <cmath>

#include "csg2l/errors.hpp"
#include "csg2l/numkit/log.hpp"

namespace csg {
namespace {

void check_config(const EncoderConfig& c, Index in_features) {
  if (in_features < 1) throw ParameterError("encoder: input must have at least one feature");
  if (c.layers < 1) throw ParameterError("encoder: layers must be >= 1");
  if (c.hidden < 1) throw ParameterError("encoder: hidden must be >= 1");
  if (!(c.dropout >= 0.0 && c.dropout < 1.0)) {
    throw ParameterError("encoder: dropout must lie in [0, 1)");
  }
}

void check_input(const PropagationOperator& op, const SparseMatrix& x, Index in_features) {
  if (x.cols() != in_features || x.rows() != op.size()) {
    throw ShapeError("encoder: expected input " + shape_str(op.size(), in_features) + ", got " +
                     shape_str(x.rows(), x.cols()));
  }
}

void collect(ParameterList& out, const Linear& l) {
  out.push_back(&l.weight());
  if (l.bias()) out.push_back(l.bias());
}

}  // namespace

std::string_view to_string(EncoderKind k) {
  switch (k) {
    case EncoderKind::gcn: return "gcn";
    case EncoderKind::gin: return "gin";
    case EncoderKind::gprgnn: return "gprgnn";
  }
  return "?";
}

std::optional<EncoderKind> parse_encoder_kind(std::string_view s) {
  if (s == "gcn") return EncoderKind::gcn;
  if (s == "gin") return EncoderKind::gin;
  if (s == "gprgnn") return EncoderKind::gprgnn;
  return std::nullopt;
}

GcnEncoder::GcnEncoder(const EncoderConfig& config, Index in_features, ParameterStore& store,
                       Rng& init_rng)
    : Encoder(config) {
  check_config(config, in_features);
  Index in = in_features;
  for (int l = 0; l < config.layers; ++l) {
    layers_.emplace_back(store, "gcn." + std::to_string(l), in, config.hidden, config.bias,
                         init_rng);
    collect(params_, layers_.back());
    in = config.hidden;
  }
}

Var GcnEncoder::forward(Tape& tape, const PropagationOperator& op, const SparseMatrix& x,
                        Rng& dropout_rng, bool training) const {
  check_input(op, x, layers_.front().in_dim());
  Var h = sparse_dropout_matmul(x, tape.param(layers_.front().weight()), config_.dropout,
                                dropout_rng, training);
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    if (l > 0) {
      h = dropout(relu(h), config_.dropout, dropout_rng, training);
      h = matmul(h, tape.param(layers_[l].weight()));
    }
    // (op h) W == op (h W); the right-hand order keeps products narrow.
    h = op.apply(h);
    if (layers_[l].bias()) h = add_row(h, tape.param(*layers_[l].bias()));
  }
  return h;
}

GinEncoder::GinEncoder(const EncoderConfig& config, Index in_features, ParameterStore& store,
                       Rng& init_rng)
    : Encoder(config) {
  check_config(config, in_features);
  Index in = in_features;
  for (int l = 0; l < config.layers; ++l) {
    const std::string name = "gin." + std::to_string(l);
    Tensor e(1, 1);
    e(0, 0) = config.gin_eps;
    eps_.push_back(&store.add(name + ".eps", e));
    mlps_.emplace_back(store, name + ".mlp", std::vector<Index>{in, config.hidden, config.hidden},
                       config.bias, config.dropout, init_rng);
    params_.push_back(eps_.back());
    for (const auto& lin : mlps_.back().layers()) collect(params_, lin);
    in = config.hidden;
  }
}

Var GinEncoder::forward(Tape& tape, const PropagationOperator& op, const SparseMatrix& x,
                        Rng& dropout_rng, bool training) const {
  check_input(op, x, mlps_.front().layers().front().in_dim());
  Var h;
  for (std::size_t l = 0; l < mlps_.size(); ++l) {
    Var p = l == 0 ? mlps_[l].first_product(tape, x, dropout_rng, training)
                   : mlps_[l].first_product(tape, relu(h), dropout_rng, training);
    Var agg = add(add(p, scale_by(tape.param(*eps_[l]), p)), op.apply(p));
    h = mlps_[l].finish(tape, agg, dropout_rng, training);
  }
  return h;
}

Tensor gpr_initial_gamma(int k, double alpha) {
  Tensor g(1, k + 1);
  for (int i = 0; i < k; ++i) g(0, i) = alpha * std::pow(1.0 - alpha, i);
  g(0, k) = std::pow(1.0 - alpha, k);
  return g;
}

GprEncoder::GprEncoder(const EncoderConfig& config, Index in_features, ParameterStore& store,
                       Rng& init_rng)
    : Encoder(config),
      mlp_(store, "gpr.mlp", std::vector<Index>{in_features, config.hidden, config.hidden},
           config.bias, config.dropout, init_rng),
      gamma_(nullptr) {
  check_config(config, in_features);
  if (config.gpr_k < 0) throw ParameterError("gprgnn: K must be >= 0");
  if (!(config.gpr_alpha > 0.0 && config.gpr_alpha <= 1.0)) {
    throw ParameterError("gprgnn: alpha must lie in (0, 1]");
  }
  if (config.gpr_k == 0) {
    log_warn("gprgnn: K = 0 disables propagation; output is gamma_0 * MLP(X)");
  }
  gamma_ = &store.add("gpr.gamma", gpr_initial_gamma(config.gpr_k, config.gpr_alpha));
  for (const auto& lin : mlp_.layers()) collect(params_, lin);
  params_.push_back(gamma_);
}

Var GprEncoder::forward(Tape& tape, const PropagationOperator& op, const SparseMatrix& x,
                        Rng& dropout_rng, bool training) const {
  check_input(op, x, mlp_.layers().front().in_dim());
  Var h0 = mlp_.forward(tape, x, dropout_rng, training);
  Var gamma = tape.param(*gamma_);
  Var out = scale_by(element(gamma, 0, 0), h0);
  Var hop = h0;
  for (int k = 1; k <= config_.gpr_k; ++k) {
    hop = op.apply(hop);
    out = add(out, scale_by(element(gamma, 0, k), hop));
  }
  return out;
}

std::unique_ptr<Encoder> make_encoder(const EncoderConfig& config, Index in_features,
                                      ParameterStore& store, Rng& init_rng) {
  switch (config.kind) {
    case EncoderKind::gcn: return std::make_unique<GcnEncoder>(config, in_features, store, init_rng);
    case EncoderKind::gin: return std::make_unique<GinEncoder>(config, in_features, store, init_rng);
    case EncoderKind::gprgnn:
      return std::make_unique<GprEncoder>(config, in_features, store, init_rng);
  }
  throw ParameterError("unknown encoder kind");
}

}  // namespace csg
