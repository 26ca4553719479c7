// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "exprkit/tensor.hpp"

namespace exprkit {

// One named array of the model. `learnable` distinguishes optimized
// parameters from state buffers (batch-norm running statistics), both of
// which live in checkpoints under the canonical naming scheme.
template <typename T>
struct Param {
  std::string name;
  std::vector<int> shape;
  std::vector<T> value;
  std::vector<T> grad;
  bool learnable = true;
  bool frozen = false;

  void resize(std::vector<int> s) {
    shape = std::move(s);
    value.assign(static_cast<std::size_t>(Tensor<T>::numel_of(shape)), T(0));
    grad.assign(value.size(), T(0));
  }
  std::int64_t numel() const { return static_cast<std::int64_t>(value.size()); }
  bool trainable() const { return learnable && !frozen; }
  void zero_grad() { std::fill(grad.begin(), grad.end(), T(0)); }
};

} // namespace exprkit
