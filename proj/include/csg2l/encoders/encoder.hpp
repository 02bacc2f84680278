#pragma once

#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "csg2l/encoders/layers.hpp"
#include "csg2l/svdaug/propagation.hpp"

namespace csg {

enum class EncoderKind { gcn, gin, gprgnn };

std::string_view to_string(EncoderKind k);
std::optional<EncoderKind> parse_encoder_kind(std::string_view s);

struct EncoderConfig {
  EncoderKind kind = EncoderKind::gcn;
  int layers = 2;
  Index hidden = 64;
  double dropout = 0.5;
  bool bias = true;
  /// GPRGNN propagation depth and teleport used for the initial weights.
  int gpr_k = 10;
  double gpr_alpha = 0.1;
  /// GIN initial value of the trainable self weight.
  double gin_eps = 0.0;
};

/// Shared graph encoder f(op, X) -> M x hidden. The same instance (and so
/// the same Parameters) serves every view; only the operator changes.
class Encoder {
 public:
  virtual ~Encoder() = default;

  /// Node features enter as a constant sparse matrix (M x F).
  virtual Var forward(Tape& tape, const PropagationOperator& op, const SparseMatrix& x,
                      Rng& dropout_rng, bool training) const = 0;

  /// Parameters owned by this encoder, in creation order.
  const ParameterList& parameters() const { return params_; }
  const EncoderConfig& config() const { return config_; }

 protected:
  explicit Encoder(EncoderConfig config) : config_(config) {}

  EncoderConfig config_;
  ParameterList params_;
};

/// Two-layer form: H = op * relu(op * drop(X) W0 + b0) W1 + b1, with
/// dropout also before W1.
class GcnEncoder : public Encoder {
 public:
  GcnEncoder(const EncoderConfig& config, Index in_features, ParameterStore& store, Rng& init_rng);
  Var forward(Tape& tape, const PropagationOperator& op, const SparseMatrix& x, Rng& dropout_rng,
              bool training) const override;

  const std::vector<Linear>& layers() const { return layers_; }

 private:
  std::vector<Linear> layers_;
};

/// Per layer: h' = MLP((1 + eps) h + op h), MLP = Linear-ReLU-Linear,
/// eps trainable per layer; ReLU between layers. The first Linear is applied
/// before aggregating (same result, narrower products), so its dropout acts
/// on the layer input.
class GinEncoder : public Encoder {
 public:
  GinEncoder(const EncoderConfig& config, Index in_features, ParameterStore& store, Rng& init_rng);
  Var forward(Tape& tape, const PropagationOperator& op, const SparseMatrix& x, Rng& dropout_rng,
              bool training) const override;

  Parameter& eps(std::size_t layer) const { return *eps_[layer]; }
  const std::vector<Mlp>& mlps() const { return mlps_; }

 private:
  std::vector<Mlp> mlps_;
  std::vector<Parameter*> eps_;
};

/// H0 = MLP(X); H = sum_{k=0..K} gamma_k op^k H0 with trainable gamma,
/// initialised gamma_k = alpha (1-alpha)^k and gamma_K = (1-alpha)^K.
class GprEncoder : public Encoder {
 public:
  GprEncoder(const EncoderConfig& config, Index in_features, ParameterStore& store, Rng& init_rng);
  Var forward(Tape& tape, const PropagationOperator& op, const SparseMatrix& x, Rng& dropout_rng,
              bool training) const override;

  Parameter& gamma() const { return *gamma_; }
  const Mlp& mlp() const { return mlp_; }

 private:
  Mlp mlp_;
  Parameter* gamma_;
};

/// Initial GPRGNN propagation weights for depth K and teleport alpha.
Tensor gpr_initial_gamma(int k, double alpha);

std::unique_ptr<Encoder> make_encoder(const EncoderConfig& config, Index in_features,
                                      ParameterStore& store, Rng& init_rng);

}  // namespace csg
