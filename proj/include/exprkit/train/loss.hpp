// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <vector>

#include "exprkit/tensor.hpp"

namespace exprkit {

// Mean softmax cross-entropy over the batch. When dlogits is non-null it
// receives d(loss)/d(logits) = (softmax - onehot) / batch.
template <typename T>
double cross_entropy(const Tensor<T>& logits, const std::vector<int>& labels,
                     Tensor<T>* dlogits = nullptr) {
  if (logits.ndim() != 2) throw ShapeError("cross_entropy: logits must be 2-d");
  const int n = logits.dim(0), k = logits.dim(1);
  if (static_cast<int>(labels.size()) != n)
    throw DataError("cross_entropy: " + std::to_string(labels.size()) + " labels for " +
                    std::to_string(n) + " rows");
  if (dlogits) *dlogits = Tensor<T>({n, k});

  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const int y = labels[static_cast<std::size_t>(i)];
    if (y < 0 || y >= k) throw DataError("label " + std::to_string(y) + " outside [0," +
                                         std::to_string(k - 1) + "]");
    const T* row = &logits[static_cast<std::int64_t>(i) * k];
    double maxv = static_cast<double>(row[0]);
    for (int j = 1; j < k; ++j) maxv = std::max(maxv, static_cast<double>(row[j]));
    double sum = 0.0;
    for (int j = 0; j < k; ++j) sum += std::exp(static_cast<double>(row[j]) - maxv);
    const double lse = maxv + std::log(sum);
    total += lse - static_cast<double>(row[y]);
    if (dlogits) {
      T* drow = &(*dlogits)[static_cast<std::int64_t>(i) * k];
      for (int j = 0; j < k; ++j) {
        const double p = std::exp(static_cast<double>(row[j]) - lse);
        drow[j] = static_cast<T>((p - (j == y ? 1.0 : 0.0)) / n);
      }
    }
  }
  return total / n;
}

} // namespace exprkit
