// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "exprkit/dataset/loader.hpp"
#include "exprkit/model/assembly.hpp"
#include "exprkit/model/checkpoint.hpp"
#include "exprkit/train/config.hpp"

namespace exprkit {

struct TrainLogRecord {
  std::int64_t iter = 0;
  double lr = 0.0;
  double loss = 0.0;
  std::optional<double> macro_f1;
};

// One JSON object per line; no timestamps, so logs of two seeded runs
// compare bitwise.
std::string log_record_json(const TrainLogRecord& record);

struct TrainOutput {
  std::filesystem::path final_checkpoint;
  std::filesystem::path best_checkpoint; // empty when no evaluation ran
  std::filesystem::path log_path;
  std::vector<TrainLogRecord> records;
  double final_loss = 0.0;
};

Checkpoint make_checkpoint(ModelAssembly<float>& model, const RunConfig& config,
                           std::uint64_t iteration, const std::string& pretext,
                           const std::string& weights_origin);

// The fine-tuning loop: cross-entropy, SGD with cosine-decayed lr, exactly
// total_iters optimizer steps over epoch-wise re-subsampled, seeded-shuffled
// batches. Single-threaded and bitwise deterministic for a fixed seed.
TrainOutput train_model(ModelAssembly<float>& model, const FrameDataset& train_data,
                        const FrameDataset* eval_data, const RunConfig& config,
                        const std::filesystem::path& out_dir,
                        const std::string& weights_origin = "random");

} // namespace exprkit
