#include "csg2l/svdaug/svd.hpp"

#include <algorithm>
#include <cmath>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "csg2l/errors.hpp"
#include "csg2l/numkit/log.hpp"

namespace csg {
namespace {

// Relative eigenvalue floor below which a Gram eigenvalue is treated as an
// exact zero singular value (its vector is then completed, not derived).
constexpr double kGramZero = 1e-12;

Tensor orthonormalize(const Tensor& y) {
  Eigen::HouseholderQR<Tensor> qr(y);
  Tensor thin = Tensor::Identity(y.rows(), y.cols());
  return qr.householderQ() * thin;
}

/// Fills columns [valid, q) of `basis` with unit vectors orthogonal to all
/// previous columns, drawn from the standard basis by Gram-Schmidt.
void complete_orthonormal(Tensor& basis, Index valid) {
  const Index n = basis.rows();
  Index next = valid;
  for (Index t = 0; t < n && next < basis.cols(); ++t) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e(t) = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (Index j = 0; j < next; ++j) {
        const double proj = basis.col(j).dot(e);
        e -= proj * basis.col(j);
      }
    }
    const double norm = e.norm();
    if (norm > 0.5) basis.col(next++) = e / norm;
  }
}

/// Eigenpairs of a symmetric matrix, descending.
void descending_eigen(const Tensor& sym, Eigen::VectorXd& values, Tensor& vectors) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(sym)};
  if (es.info() != Eigen::Success) throw Error("symmetric eigendecomposition failed");
  const Index n = sym.rows();
  values.resize(n);
  vectors.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    values(k) = es.eigenvalues()(n - 1 - k);
    vectors.col(k) = es.eigenvectors().col(n - 1 - k);
  }
}

/// Singular triplets of `b` (rows x cols, rows small) from the eigen
/// decomposition of b b^T, truncated to `q`. Returns left vectors in the
/// row space coordinates of b.
void small_svd(const Tensor& b, Index q, Tensor& left, Eigen::VectorXd& s, Tensor& right) {
  Eigen::VectorXd lambda;
  Tensor w;
  descending_eigen(b * b.transpose(), lambda, w);
  const double floor = std::max(lambda(0), 0.0) * kGramZero;
  left = w.leftCols(q);
  s.resize(q);
  right.resize(b.cols(), q);
  Index valid = 0;
  for (Index k = 0; k < q; ++k) {
    if (lambda(k) > floor && lambda(k) > 0.0) {
      s(k) = std::sqrt(lambda(k));
      right.col(k) = b.transpose() * w.col(k) / s(k);
      valid = k + 1;
    } else {
      s(k) = 0.0;
    }
  }
  complete_orthonormal(right, valid);
}

template <class Matrix>
SvdFactors approx_svd_impl(const Matrix& a, const SvdOptions& opts, Rng& rng) {
  const Index rows = a.rows(), cols = a.cols();
  const Index smaller = std::min(rows, cols);
  if (opts.rank < 1 || opts.rank > smaller) {
    throw ParameterError("approx_svd: rank " + std::to_string(opts.rank) +
                         " outside [1, " + std::to_string(smaller) + "]");
  }
  if (opts.oversample < 0) throw ParameterError("approx_svd: oversample must be >= 0");
  if (opts.power_iters < 0) throw ParameterError("approx_svd: power_iters must be >= 0");
  Index oversample = opts.oversample;
  if (opts.rank + oversample > smaller) {
    oversample = smaller - opts.rank;
    log_warn("approx_svd: rank + oversample exceeds matrix size " + std::to_string(smaller) +
             "; oversample reduced to " + std::to_string(oversample));
  }
  const Index width = opts.rank + oversample;

  Tensor omega(cols, width);
  for (Index i = 0; i < cols; ++i) {
    for (Index j = 0; j < width; ++j) omega(i, j) = rng.normal();
  }
  Tensor q = orthonormalize(a * omega);
  for (int it = 0; it < opts.power_iters; ++it) {
    Tensor z = orthonormalize(a.transpose() * q);
    q = orthonormalize(a * z);
  }
  const Tensor b = (a.transpose() * q).transpose();

  Tensor left;
  SvdFactors f;
  small_svd(b, opts.rank, left, f.s, f.v);
  f.u = q * left;
  return f;
}

template <class Matrix>
double reconstruction_error_impl(const Matrix& a, const SvdFactors& f) {
  if (a.rows() != f.u.rows() || a.cols() != f.v.rows()) {
    throw ShapeError("reconstruction_error: factors do not match " +
                     shape_str(a.rows(), a.cols()));
  }
  const Tensor sv = f.v * f.s.asDiagonal();
  constexpr Index kBlock = 256;
  double total = 0.0;
  for (Index r0 = 0; r0 < a.rows(); r0 += kBlock) {
    const Index nr = std::min(kBlock, a.rows() - r0);
    Tensor block = -(f.u.middleRows(r0, nr) * sv.transpose());
    if constexpr (std::is_same_v<Matrix, SparseMatrix>) {
      for (Index i = 0; i < nr; ++i) {
        for (SparseMatrix::InnerIterator it(a, r0 + i); it; ++it) block(i, it.col()) += it.value();
      }
    } else {
      block += a.middleRows(r0, nr);
    }
    total += block.squaredNorm();
  }
  return std::sqrt(total);
}

}  // namespace

SvdFactors approx_svd(const SparseMatrix& a, const SvdOptions& opts, Rng rng) {
  return approx_svd_impl(a, opts, rng);
}

SvdFactors approx_svd(const Tensor& a, const SvdOptions& opts, Rng rng) {
  return approx_svd_impl(a, opts, rng);
}

SvdFactors exact_svd_oracle(const Tensor& a, Index rank) {
  if (a.rows() > kExactSvdLimit || a.cols() > kExactSvdLimit) {
    throw ParameterError("exact_svd_oracle: " + shape_str(a) + " exceeds the " +
                         std::to_string(kExactSvdLimit) + " size guard");
  }
  const Index smaller = std::min(a.rows(), a.cols());
  if (rank < 1 || rank > smaller) {
    throw ParameterError("exact_svd_oracle: rank " + std::to_string(rank) + " outside [1, " +
                         std::to_string(smaller) + "]");
  }
  Eigen::VectorXd lambda;
  Tensor v;
  descending_eigen(a.transpose() * a, lambda, v);
  const double floor = std::max(lambda(0), 0.0) * kGramZero;

  SvdFactors f;
  f.v = v.leftCols(rank);
  f.s.resize(rank);
  f.u.resize(a.rows(), rank);
  Index valid = 0;
  for (Index k = 0; k < rank; ++k) {
    if (lambda(k) > floor && lambda(k) > 0.0) {
      f.s(k) = std::sqrt(lambda(k));
      f.u.col(k) = a * f.v.col(k) / f.s(k);
      valid = k + 1;
    } else {
      f.s(k) = 0.0;
    }
  }
  complete_orthonormal(f.u, valid);
  return f;
}

Tensor reconstruct(const SvdFactors& f) { return f.u * f.s.asDiagonal() * f.v.transpose(); }

double reconstruction_error(const SparseMatrix& a, const SvdFactors& f) {
  return reconstruction_error_impl(a, f);
}

double reconstruction_error(const Tensor& a, const SvdFactors& f) {
  return reconstruction_error_impl(a, f);
}

double orthonormality_residual(const SvdFactors& f) {
  const Index q = f.rank();
  const Tensor eye = Tensor::Identity(q, q);
  const double ru = (f.u.transpose() * f.u - eye).cwiseAbs().maxCoeff();
  const double rv = (f.v.transpose() * f.v - eye).cwiseAbs().maxCoeff();
  return std::max(ru, rv);
}

}  // namespace csg
