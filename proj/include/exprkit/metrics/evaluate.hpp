// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "exprkit/dataset/loader.hpp"
#include "exprkit/metrics/confusion.hpp"
#include "exprkit/model/assembly.hpp"

namespace exprkit {

// Batched argmax over logits, ties broken toward the lowest class id.
std::vector<int> argmax_rows(const Tensor<float>& logits);

// Frame-wise inference over an ordered sample list: deterministic center-crop
// preprocessing, no augmentation, output order matches input order and is
// independent of batch size.
std::vector<int> predict(ModelAssembly<float>& model, const FrameDataset& data,
                         const std::vector<FrameSample>& frames, int batch_size);

struct EvalOutcome {
  ConfusionMatrix cm;
  F1Result f1;
  std::int64_t n_frames = 0;
};

// Evaluates every valid frame of the split (the full index, no temporal
// subsampling).
EvalOutcome evaluate_dataset(ModelAssembly<float>& model, const FrameDataset& data,
                             int batch_size);

} // namespace exprkit
