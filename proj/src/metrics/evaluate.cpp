// SPDX-License-Identifier: Apache-2.0
#include "exprkit/metrics/evaluate.hpp"

#include "exprkit/error.hpp"

namespace exprkit {

std::vector<int> argmax_rows(const Tensor<float>& logits) {
  const int n = logits.dim(0), k = logits.dim(1);
  std::vector<int> out(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    const float* row = &logits[static_cast<std::int64_t>(i) * k];
    int best = 0;
    for (int j = 1; j < k; ++j)
      if (row[j] > row[best]) best = j; // strict: ties keep the lower id
    out[static_cast<std::size_t>(i)] = best;
  }
  return out;
}

std::vector<int> predict(ModelAssembly<float>& model, const FrameDataset& data,
                         const std::vector<FrameSample>& frames, int batch_size) {
  if (batch_size < 1) throw ConfigError("predict: batch_size must be >= 1");
  const int res = model.backbone_spec().input_resolution;
  std::vector<int> preds;
  preds.reserve(frames.size());
  std::vector<ImageF> batch;
  batch.reserve(static_cast<std::size_t>(batch_size));
  auto flush = [&]() {
    if (batch.empty()) return;
    const Tensor<float> images = to_batch<float>(batch, model.normalization());
    const Tensor<float> logits = model.forward(images, /*training=*/false);
    for (const int p : argmax_rows(logits)) preds.push_back(p);
    batch.clear();
  };
  for (const FrameSample& frame : frames) {
    batch.push_back(eval_preprocess(data.image(frame), res));
    if (static_cast<int>(batch.size()) == batch_size) flush();
  }
  flush();
  return preds;
}

EvalOutcome evaluate_dataset(ModelAssembly<float>& model, const FrameDataset& data,
                             int batch_size) {
  if (data.empty()) throw DataError("evaluate: no valid frames in split");
  const std::vector<int> preds = predict(model, data, data.samples(), batch_size);
  std::vector<int> labels;
  labels.reserve(data.size());
  for (const FrameSample& s : data.samples()) labels.push_back(s.label);
  EvalOutcome out;
  out.cm = confusion(labels, preds);
  out.f1 = macro_f1(out.cm);
  out.n_frames = static_cast<std::int64_t>(labels.size());
  return out;
}

} // namespace exprkit
