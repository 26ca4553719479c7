// SPDX-License-Identifier: Apache-2.0
#include "exprkit/metrics/confusion.hpp"

#include "exprkit/error.hpp"

namespace exprkit {

ConfusionMatrix confusion(const std::vector<int>& labels, const std::vector<int>& preds) {
  if (labels.empty()) throw DataError("confusion: empty input");
  if (labels.size() != preds.size())
    throw DataError("confusion: " + std::to_string(labels.size()) + " labels vs " +
                    std::to_string(preds.size()) + " predictions");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int t = labels[i], p = preds[i];
    if (t < 0 || t >= kNumClasses || p < 0 || p >= kNumClasses)
      throw DataError("confusion: class id outside [0,7]");
    ++cm.m[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)];
  }
  return cm;
}

F1Result macro_f1(const ConfusionMatrix& cm) {
  if (cm.total() < 1) throw DataError("macro_f1: empty confusion matrix");
  F1Result result;
  double sum = 0.0;
  for (int c = 0; c < kNumClasses; ++c) {
    const std::int64_t tp = cm.m[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
    std::int64_t fp = 0, fn = 0;
    for (int o = 0; o < kNumClasses; ++o) {
      if (o == c) continue;
      fp += cm.m[static_cast<std::size_t>(o)][static_cast<std::size_t>(c)];
      fn += cm.m[static_cast<std::size_t>(c)][static_cast<std::size_t>(o)];
    }
    const std::int64_t denom = 2 * tp + fp + fn;
    const double f1 = denom == 0 ? 0.0 : 100.0 * 2.0 * static_cast<double>(tp) /
                                             static_cast<double>(denom);
    result.per_class[static_cast<std::size_t>(c)] = f1;
    sum += f1;
  }
  result.macro = sum / kNumClasses;
  return result;
}

} // namespace exprkit
