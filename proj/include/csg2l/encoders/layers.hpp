#pragma once

#include <string>
#include <vector>

#include "csg2l/numkit/ops.hpp"
#include "csg2l/numkit/params.hpp"

namespace csg {

/// y = x W (+ b). W is in x out, Glorot-initialized; b starts at zero.
class Linear {
 public:
  Linear(ParameterStore& store, const std::string& name, Index in, Index out, bool bias,
         Rng& init_rng);

  Var forward(Tape& tape, Var x) const;

  Parameter& weight() const { return *weight_; }
  Parameter* bias() const { return bias_; }
  Index in_dim() const { return weight_->value.rows(); }
  Index out_dim() const { return weight_->value.cols(); }

 private:
  Parameter* weight_;
  Parameter* bias_ = nullptr;
};

/// Stack of Linear layers with ReLU between them (none after the last).
/// When `dropout` > 0, inverted dropout precedes every layer in training.
class Mlp {
 public:
  Mlp(ParameterStore& store, const std::string& name, const std::vector<Index>& dims, bool bias,
      double dropout, Rng& init_rng);

  Var forward(Tape& tape, Var x, Rng& dropout_rng, bool training) const;
  Var forward(Tape& tape, const SparseMatrix& x, Rng& dropout_rng, bool training) const;

  /// Split form of forward: the first layer's drop(x) W without its bias,
  /// then `finish` adds that bias and runs the remaining layers.
  Var first_product(Tape& tape, Var x, Rng& dropout_rng, bool training) const;
  Var first_product(Tape& tape, const SparseMatrix& x, Rng& dropout_rng, bool training) const;
  Var finish(Tape& tape, Var first, Rng& dropout_rng, bool training) const;

  const std::vector<Linear>& layers() const { return layers_; }
  Index out_dim() const { return layers_.back().out_dim(); }

 private:
  std::vector<Linear> layers_;
  double dropout_;
};

}  // namespace csg
