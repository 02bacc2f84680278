#pragma once

#include <deque>
#include <string>
#include <vector>

#include "csg2l/numkit/tensor.hpp"

namespace csg {

/// Owns a model's parameters at stable addresses, in creation order.
class ParameterStore {
 public:
  ParameterStore() = default;
  ParameterStore(const ParameterStore&) = delete;
  ParameterStore& operator=(const ParameterStore&) = delete;

  Parameter& add(std::string name, Tensor init) {
    params_.emplace_back(std::move(name), std::move(init));
    return params_.back();
  }

  ParameterList list() {
    ParameterList out;
    out.reserve(params_.size());
    for (auto& p : params_) out.push_back(&p);
    return out;
  }

  std::vector<Tensor> snapshot() const {
    std::vector<Tensor> out;
    out.reserve(params_.size());
    for (const auto& p : params_) out.push_back(p.value);
    return out;
  }

  void restore(const std::vector<Tensor>& values) {
    for (std::size_t i = 0; i < params_.size() && i < values.size(); ++i) {
      params_[i].value = values[i];
    }
  }

  void zero_grad() {
    for (auto& p : params_) p.zero_grad();
  }

  std::size_t size() const { return params_.size(); }
  Parameter& operator[](std::size_t i) { return params_[i]; }
  const Parameter& operator[](std::size_t i) const { return params_[i]; }

 private:
  std::deque<Parameter> params_;
};

}  // namespace csg
