#pragma once

#include <memory>
#include <variant>

#include "csg2l/graphio/graph.hpp"
#include "csg2l/numkit/tape.hpp"
#include "csg2l/svdaug/svd.hpp"

namespace csg {

/// Dense product of truncated factors with x, u * (s .* (v^T x)), in
/// O(M q d) without forming the M x M reconstruction.
Tensor factored_apply(const SvdFactors& f, const Tensor& x);

/// Recorded variant; gradient flows to x only (factors are constants).
Var factored_apply(std::shared_ptr<const SvdFactors> f, Var x);

/// The graph operator an encoder propagates with: either the explicit
/// sparse normalized adjacency or the factored low-rank reconstruction.
/// Holds shared immutable data, so copies are cheap and thread-safe.
class PropagationOperator {
 public:
  static PropagationOperator explicit_adjacency(std::shared_ptr<const NormalizedAdjacency> adj);
  static PropagationOperator factored(std::shared_ptr<const SvdFactors> factors);

  Tensor apply(const Tensor& x) const;
  Var apply(Var x) const;

  Index size() const;
  bool is_factored() const { return std::holds_alternative<Factored>(impl_); }

 private:
  using Explicit = std::shared_ptr<const NormalizedAdjacency>;
  using Factored = std::shared_ptr<const SvdFactors>;

  explicit PropagationOperator(std::variant<Explicit, Factored> impl) : impl_(std::move(impl)) {}

  std::variant<Explicit, Factored> impl_;
};

}  // namespace csg
