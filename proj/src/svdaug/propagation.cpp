#include "csg2l/svdaug/propagation.hpp"

#include "csg2l/errors.hpp"

namespace csg {
namespace {

void check_rows(const char* what, Index op_size, const Tensor& x) {
  if (x.rows() != op_size) {
    throw ShapeError(std::string(what) + ": operator of size " + std::to_string(op_size) +
                     " cannot propagate " + shape_str(x));
  }
}

}  // namespace

Tensor factored_apply(const SvdFactors& f, const Tensor& x) {
  check_rows("factored_apply", f.v.rows(), x);
  Tensor inner = f.v.transpose() * x;
  inner = f.s.asDiagonal() * inner;
  return f.u * inner;
}

Var factored_apply(std::shared_ptr<const SvdFactors> f, Var x) {
  Tensor out = factored_apply(*f, x.value());
  return x.tape().record(std::move(out), {x}, [f, x](Tape& t, const Tensor& g) {
    // Adjoint of u diag(s) v^T is v diag(s) u^T.
    Tensor inner = f->u.transpose() * g;
    inner = f->s.asDiagonal() * inner;
    t.accumulate(x, f->v * inner);
  });
}

PropagationOperator PropagationOperator::explicit_adjacency(
    std::shared_ptr<const NormalizedAdjacency> adj) {
  if (!adj) throw Error("explicit_adjacency: null adjacency");
  return PropagationOperator(std::move(adj));
}

PropagationOperator PropagationOperator::factored(std::shared_ptr<const SvdFactors> factors) {
  if (!factors) throw Error("factored: null factors");
  return PropagationOperator(std::move(factors));
}

Index PropagationOperator::size() const {
  if (const auto* e = std::get_if<Explicit>(&impl_)) return (*e)->size();
  return std::get<Factored>(impl_)->u.rows();
}

Tensor PropagationOperator::apply(const Tensor& x) const {
  if (const auto* e = std::get_if<Explicit>(&impl_)) {
    check_rows("propagate", (*e)->size(), x);
    return (*e)->matrix * x;
  }
  return factored_apply(*std::get<Factored>(impl_), x);
}

Var PropagationOperator::apply(Var x) const {
  if (const auto* e = std::get_if<Explicit>(&impl_)) {
    check_rows("propagate", (*e)->size(), x.value());
    Explicit adj = *e;
    Tensor out = adj->matrix * x.value();
    return x.tape().record(std::move(out), {x}, [adj, x](Tape& t, const Tensor& g) {
      t.accumulate(x, adj->matrix.transpose() * g);
    });
  }
  return factored_apply(std::get<Factored>(impl_), x);
}

}  // namespace csg
