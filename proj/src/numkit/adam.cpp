#include "csg2l/numkit/adam.hpp"

#include <cmath>

#include "csg2l/errors.hpp"

namespace csg {

Adam::Adam(ParameterList params, AdamConfig config)
    : params_(std::move(params)), config_(config) {
  if (!(config_.lr > 0.0)) throw ParameterError("Adam: learning rate must be positive");
  if (config_.weight_decay < 0.0) throw ParameterError("Adam: weight decay must be >= 0");
  first_.reserve(params_.size());
  second_.reserve(params_.size());
  for (const Parameter* p : params_) {
    first_.push_back(Tensor::Zero(p->value.rows(), p->value.cols()));
    second_.push_back(Tensor::Zero(p->value.rows(), p->value.cols()));
  }
}

void Adam::step() {
  ++step_;
  const double t = static_cast<double>(step_);
  const double bc1 = 1.0 - std::pow(config_.beta1, t);
  const double bc2 = 1.0 - std::pow(config_.beta2, t);
  for (std::size_t i = 0; i < params_.size(); ++i) {
    Parameter& p = *params_[i];
    Tensor g = p.grad;
    if (config_.weight_decay != 0.0) g += config_.weight_decay * p.value;
    first_[i] = config_.beta1 * first_[i] + (1.0 - config_.beta1) * g;
    second_[i] = config_.beta2 * second_[i] + (1.0 - config_.beta2) * g.cwiseAbs2();
    const double step_size = config_.lr / bc1;
    p.value.array() -= step_size * first_[i].array() /
                       ((second_[i].array() / bc2).sqrt() + config_.eps);
  }
}

void Adam::zero_grad() {
  for (Parameter* p : params_) p->zero_grad();
}

}  // namespace csg
