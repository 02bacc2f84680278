#pragma once

#include <memory>

#include "csg2l/encoders/encoder.hpp"

namespace csg {

struct ModelConfig {
  EncoderConfig encoder;
  /// 1 = single linear layer; 2 = hidden -> hidden -> classes with ReLU.
  int classifier_layers = 1;
};

/// Encoder f, projection head g (hidden -> hidden -> hidden, ReLU between)
/// and classifier c (hidden -> classes), all in one parameter store.
///
/// Parameters are created in a fixed order (encoder, head, classifier) from
/// `init_rng`, so every training mode starts from identical weights.
class Model {
 public:
  Model(const ModelConfig& config, Index in_features, Index num_classes, Rng init_rng);
  Model(const Model&) = delete;
  Model& operator=(const Model&) = delete;

  Var encode(Tape& tape, const PropagationOperator& op, const SparseMatrix& x, Rng& dropout_rng,
             bool training) const {
    return encoder_->forward(tape, op, x, dropout_rng, training);
  }

  /// g(H); no dropout.
  Var project(Tape& tape, Var h) const;

  /// Class logits c(H); softmax of these is the prediction P.
  Var classify(Tape& tape, Var h) const;

  ParameterStore& store() { return store_; }
  const Encoder& encoder() const { return *encoder_; }
  const Mlp& projection() const { return *projection_; }
  const Mlp& classifier() const { return *classifier_; }
  const ModelConfig& config() const { return config_; }

 private:
  ModelConfig config_;
  ParameterStore store_;
  std::unique_ptr<Encoder> encoder_;
  std::unique_ptr<Mlp> projection_;
  std::unique_ptr<Mlp> classifier_;
};

}  // namespace csg
