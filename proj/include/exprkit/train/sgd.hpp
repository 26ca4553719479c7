// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "exprkit/nn/param.hpp"

namespace exprkit {

// Per-parameter momentum buffers, keyed by canonical name.
template <typename T>
struct SgdState {
  std::map<std::string, std::vector<T>> velocity;
};

// One SGD update over the trainable parameters:
//   v' = momentum * v + (grad + weight_decay * param)
//   param' = param - lr * v'
// Frozen parameters and non-learnable buffers are untouched.
template <typename T>
void sgd_step(const std::vector<Param<T>*>& params, double lr, double momentum,
              double weight_decay, SgdState<T>& state) {
  for (Param<T>* p : params) {
    if (!p->trainable()) continue;
    auto& v = state.velocity[p->name];
    if (v.size() != p->value.size()) v.assign(p->value.size(), T(0));
    for (std::size_t i = 0; i < p->value.size(); ++i) {
      if (!std::isfinite(static_cast<double>(p->grad[i])))
        throw NumericsError("non-finite gradient in " + p->name);
      const T g = p->grad[i] + static_cast<T>(weight_decay) * p->value[i];
      v[i] = static_cast<T>(momentum) * v[i] + g;
      p->value[i] -= static_cast<T>(lr) * v[i];
    }
  }
}

} // namespace exprkit
