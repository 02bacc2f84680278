#pragma once

#include "csg2l/graphio/graph.hpp"
#include "csg2l/numkit/rng.hpp"
#include "csg2l/numkit/tensor.hpp"

namespace csg {

/// Rank-q truncated singular triplets: A ~ u * diag(s) * v^T with s
/// descending and non-negative, u and v column-orthonormal.
struct SvdFactors {
  Tensor u;
  Eigen::VectorXd s;
  Tensor v;

  Index rank() const { return s.size(); }
};

struct SvdOptions {
  Index rank = 5;
  Index oversample = 10;
  int power_iters = 4;
};

/// Randomized range finder followed by an exact SVD of the projected
/// matrix. Gaussian test vectors come from `rng` (Box-Muller), so equal
/// seeds give equal factors. If rank + oversample exceeds the matrix size
/// the oversampling is reduced and a warning is logged.
SvdFactors approx_svd(const SparseMatrix& a, const SvdOptions& opts, Rng rng);
SvdFactors approx_svd(const Tensor& a, const SvdOptions& opts, Rng rng);

inline SvdFactors approx_svd(const NormalizedAdjacency& adj, const SvdOptions& opts, Rng rng) {
  return approx_svd(adj.matrix, opts, std::move(rng));
}

/// Largest size accepted by exact_svd_oracle.
inline constexpr Index kExactSvdLimit = 500;

/// Exact rank-q truncation through a dense symmetric eigendecomposition of
/// the Gram matrix a^T a. Test/report oracle; throws ParameterError above
/// kExactSvdLimit rows or columns.
SvdFactors exact_svd_oracle(const Tensor& a, Index rank);

/// Dense u * diag(s) * v^T.
Tensor reconstruct(const SvdFactors& f);

/// ||a - u diag(s) v^T||_F, accumulated row block by row block so the
/// residual is never held in full.
double reconstruction_error(const SparseMatrix& a, const SvdFactors& f);
double reconstruction_error(const Tensor& a, const SvdFactors& f);

/// max |Q^T Q - I| over u and v.
double orthonormality_residual(const SvdFactors& f);

}  // namespace csg
