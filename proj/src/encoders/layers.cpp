#include "csg2l/encoders/layers.hpp"

#include "csg2l/errors.hpp"

namespace csg {

Linear::Linear(ParameterStore& store, const std::string& name, Index in, Index out, bool bias,
               Rng& init_rng)
    : weight_(&store.add(name + ".weight", glorot_init(in, out, init_rng))) {
  if (bias) bias_ = &store.add(name + ".bias", Tensor::Zero(1, out));
}

Var Linear::forward(Tape& tape, Var x) const {
  Var y = matmul(x, tape.param(*weight_));
  if (bias_) y = add_row(y, tape.param(*bias_));
  return y;
}

Mlp::Mlp(ParameterStore& store, const std::string& name, const std::vector<Index>& dims,
         bool bias, double dropout, Rng& init_rng)
    : dropout_(dropout) {
  if (dims.size() < 2) throw ParameterError("Mlp needs at least input and output sizes");
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    layers_.emplace_back(store, name + "." + std::to_string(i), dims[i], dims[i + 1], bias,
                         init_rng);
  }
}

Var Mlp::forward(Tape& tape, Var x, Rng& dropout_rng, bool training) const {
  Var h = x;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    if (i > 0) h = relu(h);
    h = dropout(h, dropout_, dropout_rng, training);
    h = layers_[i].forward(tape, h);
  }
  return h;
}

Var Mlp::forward(Tape& tape, const SparseMatrix& x, Rng& dropout_rng, bool training) const {
  return finish(tape, first_product(tape, x, dropout_rng, training), dropout_rng, training);
}

Var Mlp::first_product(Tape& tape, Var x, Rng& dropout_rng, bool training) const {
  return matmul(dropout(x, dropout_, dropout_rng, training),
                tape.param(layers_.front().weight()));
}

Var Mlp::first_product(Tape& tape, const SparseMatrix& x, Rng& dropout_rng,
                       bool training) const {
  return sparse_dropout_matmul(x, tape.param(layers_.front().weight()), dropout_, dropout_rng,
                               training);
}

Var Mlp::finish(Tape& tape, Var first, Rng& dropout_rng, bool training) const {
  Var h = first;
  if (layers_.front().bias()) h = add_row(h, tape.param(*layers_.front().bias()));
  for (std::size_t i = 1; i < layers_.size(); ++i) {
    h = dropout(relu(h), dropout_, dropout_rng, training);
    h = layers_[i].forward(tape, h);
  }
  return h;
}

}  // namespace csg
