#include "csg2l/encoders/model.hpp"

#include "csg2l/errors.hpp"

namespace csg {

Model::Model(const ModelConfig& config, Index in_features, Index num_classes, Rng init_rng)
    : config_(config) {
  if (num_classes < 1) throw ParameterError("model: need at least one class");
  if (config.classifier_layers < 1 || config.classifier_layers > 2) {
    throw ParameterError("model: classifier_layers must be 1 or 2");
  }
  const Index m = config.encoder.hidden;
  encoder_ = make_encoder(config.encoder, in_features, store_, init_rng);
  projection_ = std::make_unique<Mlp>(store_, "proj", std::vector<Index>{m, m, m}, true, 0.0,
                                      init_rng);
  std::vector<Index> dims = {m};
  if (config.classifier_layers == 2) dims.push_back(m);
  dims.push_back(num_classes);
  classifier_ = std::make_unique<Mlp>(store_, "cls", dims, true, 0.0, init_rng);
}

Var Model::project(Tape& tape, Var h) const {
  Rng unused(0);
  return projection_->forward(tape, h, unused, false);
}

Var Model::classify(Tape& tape, Var h) const {
  Rng unused(0);
  return classifier_->forward(tape, h, unused, false);
}

}  // namespace csg
