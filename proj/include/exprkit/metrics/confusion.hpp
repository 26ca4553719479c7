// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "exprkit/dataset/label_space.hpp"

namespace exprkit {

// 8x8 count matrix; rows are true classes, columns predictions.
struct ConfusionMatrix {
  std::array<std::array<std::int64_t, kNumClasses>, kNumClasses> m{};

  std::int64_t total() const {
    std::int64_t t = 0;
    for (const auto& row : m)
      for (const std::int64_t v : row) t += v;
    return t;
  }
};

ConfusionMatrix confusion(const std::vector<int>& labels, const std::vector<int>& preds);

// Per-class and macro F1, both scaled by 100. A class with an empty
// denominator (absent from labels and predictions) scores 0 and still
// counts toward the mean over all eight categories.
struct F1Result {
  std::array<double, kNumClasses> per_class{};
  double macro = 0.0;
};

F1Result macro_f1(const ConfusionMatrix& cm);

} // namespace exprkit
