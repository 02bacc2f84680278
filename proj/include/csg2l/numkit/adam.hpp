#pragma once

#include <cstdint>
#include <vector>

#include "csg2l/numkit/tensor.hpp"

namespace csg {

struct AdamConfig {
  double lr = 0.05;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  /// L2 coefficient added to the gradient (g + wd * theta) before the
  /// moment update.
  double weight_decay = 0.0;
};

/// Adam with bias correction over a fixed parameter list.
class Adam {
 public:
  Adam(ParameterList params, AdamConfig config);

  void step();
  void zero_grad();

  std::int64_t steps() const { return step_; }
  const AdamConfig& config() const { return config_; }

 private:
  ParameterList params_;
  AdamConfig config_;
  std::vector<Tensor> first_;
  std::vector<Tensor> second_;
  std::int64_t step_ = 0;
};

}  // namespace csg
