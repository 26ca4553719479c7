// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>

#include "exprkit/error.hpp"

namespace exprkit {

// Cosine decay from base_lr at t = 0 to exactly 0 at t = total:
//   lr(t) = base_lr * (1 + cos(pi t / total)) / 2
inline double cosine_lr(std::int64_t t, std::int64_t total, double base_lr) {
  if (total < 1) throw ConfigError("cosine_lr: total iterations must be >= 1");
  if (t < 0 || t > total)
    throw ConfigError("cosine_lr: iteration " + std::to_string(t) + " outside [0, " +
                      std::to_string(total) + "]");
  return base_lr * 0.5 * (1.0 + std::cos(3.14159265358979323846 * static_cast<double>(t) /
                                          static_cast<double>(total)));
}

} // namespace exprkit
