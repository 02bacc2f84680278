#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <initializer_list>

#include "csg2l/numkit/tensor.hpp"

namespace csg {

class Tape;

/// Handle to a value recorded on a Tape. Cheap to copy; valid as long as the
/// tape that issued it.
class Var {
 public:
  Var() = default;

  const Tensor& value() const;
  Index rows() const { return value().rows(); }
  Index cols() const { return value().cols(); }
  bool requires_grad() const;
  Tape& tape() const { return *tape_; }
  std::size_t id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

/// Reverse-mode recording of tensor operations.
///
/// Nodes are appended in evaluation order, so reverse creation order is a
/// valid topological order for backpropagation. A tape is meant to live for
/// one forward/backward pass and is not shared between threads.
class Tape {
 public:
  /// Receives the upstream gradient of the node and must push gradients
  /// into its inputs via accumulate().
  using BackwardFn = std::function<void(Tape&, const Tensor& upstream)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Tensor value);

  /// Leaf bound to a Parameter; backward() adds into `p.grad`.
  Var param(Parameter& p);

  /// Records an op result. The node requires a gradient iff any input does;
  /// `fn` is dropped otherwise.
  Var record(Tensor value, std::initializer_list<Var> inputs, BackwardFn fn);

  /// Backpropagates from a 1x1 loss and accumulates into every reachable
  /// Parameter's grad. May be called more than once; each call adds again.
  void backward(Var loss);

  /// Adds `g` to the gradient slot of `v` when `v` requires a gradient.
  void accumulate(Var v, const Tensor& g);

  const Tensor& value(Var v) const { return nodes_[v.id_].value; }
  bool requires_grad(Var v) const { return nodes_[v.id_].requires_grad; }
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    bool requires_grad = false;
    bool has_grad = false;
    BackwardFn backward;
    Parameter* param = nullptr;
  };

  void check_owner(Var v) const;

  std::deque<Node> nodes_;
};

inline const Tensor& Var::value() const { return tape_->value(*this); }
inline bool Var::requires_grad() const { return tape_->requires_grad(*this); }

}  // namespace csg
