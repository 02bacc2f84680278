#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <string>
#include <vector>

namespace csg {

/// Dense row-major matrix of doubles; the value type for every array in the
/// library. Vectors are stored as single-row or single-column tensors.
using Tensor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Index = Eigen::Index;

std::string shape_str(Index rows, Index cols);

inline std::string shape_str(const Tensor& t) { return shape_str(t.rows(), t.cols()); }

bool all_finite(const Tensor& t);

/// Trainable weight with its accumulated gradient.
struct Parameter {
  Parameter(std::string name, Tensor value)
      : name(std::move(name)), value(std::move(value)) {
    grad = Tensor::Zero(this->value.rows(), this->value.cols());
  }

  void zero_grad() { grad.setZero(); }

  std::string name;
  Tensor value;
  Tensor grad;
};

using ParameterList = std::vector<Parameter*>;

}  // namespace csg
