#pragma once

#include "csg2l/numkit/rng.hpp"
#include "csg2l/numkit/tape.hpp"

namespace csg {

// Recorded operations. Every function checks shapes and throws ShapeError
// naming both operands on mismatch.

Var matmul(Var a, Var b);
Var add(Var a, Var b);
Var sub(Var a, Var b);
/// Elementwise product.
Var mul(Var a, Var b);
/// a + bias, bias broadcast over rows (bias is 1 x cols).
Var add_row(Var a, Var bias);
Var scale(Var a, double factor);
/// s * a where s is a recorded 1x1 value (trainable scalars).
Var scale_by(Var s, Var a);
/// Gradient at exactly 0 is 0.
Var relu(Var a);
Var row_softmax(Var a);
/// Sum of all entries as a 1x1 value.
Var sum(Var a);
Var mean(Var a);
/// Entry (r, c) as a 1x1 value.
Var element(Var a, Index r, Index c);
/// Constant sparse operator times a recorded dense matrix.
Var sparse_matmul(const SparseMatrix& op, Var x);

/// Inverted dropout. In training mode each entry is zeroed with probability
/// `rate` and survivors are scaled by 1/(1-rate); otherwise identity. Draws
/// one uniform per entry (row-major) only when training and rate > 0.
Var dropout(Var a, double rate, Rng& rng, bool training);

/// drop(x) w for a constant sparse input. Dropout acts on the stored entries
/// only (one uniform each, row-major); a zero entry is unchanged by dropping
/// it, so this equals dropout(x) w in distribution. Gradient flows to w.
Var sparse_dropout_matmul(const SparseMatrix& x, Var w, double rate, Rng& rng, bool training);

// Plain value helpers.

Tensor row_softmax(const Tensor& logits);

/// Glorot/Xavier uniform on [-a, a], a = sqrt(6 / (rows + cols)).
Tensor glorot_init(Index rows, Index cols, Rng& rng);

}  // namespace csg
