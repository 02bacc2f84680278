#include "csg2l/numkit/ops.hpp"

#include <cmath>
#include <memory>

#include "csg2l/errors.hpp"

namespace csg {
namespace {

void require_same_shape(const char* op, Var a, Var b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(op) + ": shape mismatch " + shape_str(a.value()) + " vs " +
                     shape_str(b.value()));
  }
}

void require_scalar(const char* op, Var s) {
  if (s.rows() != 1 || s.cols() != 1) {
    throw ShapeError(std::string(op) + ": expected 1x1 scalar, got " + shape_str(s.value()));
  }
}

}  // namespace

Var matmul(Var a, Var b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: inner dimensions differ, " + shape_str(a.value()) + " * " +
                     shape_str(b.value()));
  }
  Tensor out = a.value() * b.value();
  return a.tape().record(std::move(out), {a, b}, [a, b](Tape& t, const Tensor& g) {
    if (a.requires_grad()) t.accumulate(a, g * b.value().transpose());
    if (b.requires_grad()) t.accumulate(b, a.value().transpose() * g);
  });
}

Var add(Var a, Var b) {
  require_same_shape("add", a, b);
  Tensor out = a.value() + b.value();
  return a.tape().record(std::move(out), {a, b}, [a, b](Tape& t, const Tensor& g) {
    t.accumulate(a, g);
    t.accumulate(b, g);
  });
}

Var sub(Var a, Var b) {
  require_same_shape("sub", a, b);
  Tensor out = a.value() - b.value();
  return a.tape().record(std::move(out), {a, b}, [a, b](Tape& t, const Tensor& g) {
    t.accumulate(a, g);
    if (b.requires_grad()) t.accumulate(b, -g);
  });
}

Var mul(Var a, Var b) {
  require_same_shape("mul", a, b);
  Tensor out = a.value().cwiseProduct(b.value());
  return a.tape().record(std::move(out), {a, b}, [a, b](Tape& t, const Tensor& g) {
    if (a.requires_grad()) t.accumulate(a, g.cwiseProduct(b.value()));
    if (b.requires_grad()) t.accumulate(b, g.cwiseProduct(a.value()));
  });
}

Var add_row(Var a, Var bias) {
  if (bias.rows() != 1 || bias.cols() != a.cols()) {
    throw ShapeError("add_row: bias " + shape_str(bias.value()) + " does not fit " +
                     shape_str(a.value()));
  }
  Tensor out = a.value().rowwise() + bias.value().row(0);
  return a.tape().record(std::move(out), {a, bias}, [a, bias](Tape& t, const Tensor& g) {
    t.accumulate(a, g);
    if (bias.requires_grad()) t.accumulate(bias, g.colwise().sum());
  });
}

Var scale(Var a, double factor) {
  Tensor out = a.value() * factor;
  return a.tape().record(std::move(out), {a}, [a, factor](Tape& t, const Tensor& g) {
    t.accumulate(a, g * factor);
  });
}

Var scale_by(Var s, Var a) {
  require_scalar("scale_by", s);
  const double k = s.value()(0, 0);
  Tensor out = a.value() * k;
  return a.tape().record(std::move(out), {s, a}, [s, a, k](Tape& t, const Tensor& g) {
    if (s.requires_grad()) {
      Tensor gs(1, 1);
      gs(0, 0) = g.cwiseProduct(a.value()).sum();
      t.accumulate(s, gs);
    }
    if (a.requires_grad()) t.accumulate(a, g * k);
  });
}

Var relu(Var a) {
  Tensor out = a.value().cwiseMax(0.0);
  return a.tape().record(std::move(out), {a}, [a](Tape& t, const Tensor& g) {
    Tensor mask = (a.value().array() > 0.0).cast<double>();
    t.accumulate(a, g.cwiseProduct(mask));
  });
}

Tensor row_softmax(const Tensor& logits) {
  Tensor out(logits.rows(), logits.cols());
  for (Index i = 0; i < logits.rows(); ++i) {
    const double mx = logits.row(i).maxCoeff();
    out.row(i) = (logits.row(i).array() - mx).exp().matrix();
    out.row(i) /= out.row(i).sum();
  }
  return out;
}

Var row_softmax(Var a) {
  Tensor p = row_softmax(a.value());
  Tensor saved = p;
  return a.tape().record(std::move(p), {a}, [a, saved](Tape& t, const Tensor& g) {
    // dL/dx_ij = p_ij (g_ij - sum_k g_ik p_ik)
    Eigen::VectorXd dots = g.cwiseProduct(saved).rowwise().sum();
    Tensor gx = saved.cwiseProduct(g - dots.replicate(1, g.cols()));
    t.accumulate(a, gx);
  });
}

Var sum(Var a) {
  Tensor out(1, 1);
  out(0, 0) = a.value().sum();
  const Index r = a.rows(), c = a.cols();
  return a.tape().record(std::move(out), {a}, [a, r, c](Tape& t, const Tensor& g) {
    t.accumulate(a, Tensor::Constant(r, c, g(0, 0)));
  });
}

Var mean(Var a) {
  const double n = static_cast<double>(a.value().size());
  if (n == 0) throw ShapeError("mean of empty tensor");
  return scale(sum(a), 1.0 / n);
}

Var element(Var a, Index r, Index c) {
  if (r < 0 || c < 0 || r >= a.rows() || c >= a.cols()) {
    throw ShapeError("element: index (" + std::to_string(r) + "," + std::to_string(c) +
                     ") outside " + shape_str(a.value()));
  }
  Tensor out(1, 1);
  out(0, 0) = a.value()(r, c);
  return a.tape().record(std::move(out), {a}, [a, r, c](Tape& t, const Tensor& g) {
    Tensor ga = Tensor::Zero(a.rows(), a.cols());
    ga(r, c) = g(0, 0);
    t.accumulate(a, ga);
  });
}

Var sparse_matmul(const SparseMatrix& op, Var x) {
  if (op.cols() != x.rows()) {
    throw ShapeError("sparse_matmul: operator " + shape_str(op.rows(), op.cols()) +
                     " cannot multiply " + shape_str(x.value()));
  }
  Tensor out = op * x.value();
  // The operator is captured by pointer; it must outlive the tape.
  const SparseMatrix* opp = &op;
  return x.tape().record(std::move(out), {x}, [x, opp](Tape& t, const Tensor& g) {
    t.accumulate(x, opp->transpose() * g);
  });
}

Var dropout(Var a, double rate, Rng& rng, bool training) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw ParameterError("dropout: rate must lie in [0, 1), got " + std::to_string(rate));
  }
  if (!training || rate == 0.0) return a;
  const double keep_scale = 1.0 / (1.0 - rate);
  Tensor mask(a.rows(), a.cols());
  for (Index i = 0; i < mask.rows(); ++i) {
    for (Index j = 0; j < mask.cols(); ++j) {
      mask(i, j) = rng.uniform() < rate ? 0.0 : keep_scale;
    }
  }
  Tensor out = a.value().cwiseProduct(mask);
  return a.tape().record(std::move(out), {a}, [a, mask](Tape& t, const Tensor& g) {
    t.accumulate(a, g.cwiseProduct(mask));
  });
}

Var sparse_dropout_matmul(const SparseMatrix& x, Var w, double rate, Rng& rng, bool training) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw ParameterError("dropout: rate must lie in [0, 1), got " + std::to_string(rate));
  }
  if (x.cols() != w.rows()) {
    throw ShapeError("sparse_dropout_matmul: input " + shape_str(x.rows(), x.cols()) +
                     " cannot multiply " + shape_str(w.value()));
  }
  auto dropped = std::make_shared<SparseMatrix>(x);
  if (training && rate > 0.0) {
    const double keep_scale = 1.0 / (1.0 - rate);
    for (Index i = 0; i < dropped->outerSize(); ++i) {
      for (SparseMatrix::InnerIterator it(*dropped, i); it; ++it) {
        it.valueRef() *= rng.uniform() < rate ? 0.0 : keep_scale;
      }
    }
  }
  Tensor out = *dropped * w.value();
  return w.tape().record(std::move(out), {w}, [w, dropped](Tape& t, const Tensor& g) {
    t.accumulate(w, dropped->transpose() * g);
  });
}

Tensor glorot_init(Index rows, Index cols, Rng& rng) {
  if (rows < 1 || cols < 1) {
    throw ParameterError("glorot_init: dimensions must be positive, got " +
                         shape_str(rows, cols));
  }
  const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Tensor w(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) w(i, j) = rng.uniform(-bound, bound);
  }
  return w;
}

}  // namespace csg
