// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>

#include "exprkit/dataset/augment.hpp"
#include "exprkit/model/assembly.hpp"
#include "exprkit/model/head.hpp"

namespace exprkit {

struct DataConfig {
  std::string split = "train";
  std::string eval_split; // empty: no in-training evaluation
  int temporal_stride = 10;
  int crop_size = -1; // -1: follow model input_resolution
  int crop_padding = 8;
  double hflip_probability = 0.5;
  std::array<double, 3> mean{0.5, 0.5, 0.5};
  std::array<double, 3> std{0.5, 0.5, 0.5};
};

struct ModelConfig {
  std::string backbone = "res50";
  int input_resolution = 224;
  HeadConfig head;
};

// The fine-tuning recipe. Defaults are the published ones: SGD, base lr
// 5e-3 with cosine decay to zero, 8000 iterations, batch 128, first two
// backbone stages frozen.
struct TrainSection {
  double base_lr = 5e-3;
  int total_iters = 8000;
  int batch_size = 128;
  double momentum = 0.9;
  double weight_decay = 1e-4;
  int freeze_k = 2;
  std::uint64_t seed = 0;
  int eval_every = 100;
  std::string amp = "off"; // mixed precision is out of scope; must stay off
};

struct EvalSection {
  int batch_size = 32;
  std::string split = "val";
};

struct PretrainSection {
  int steps = 1000;
  double base_lr = 0.01;
  int batch_size = 8; // anchors per step; three views each
  double temperature = 0.1;
  double warp_magnitude = 10.0; // pixels, at view_size scale
  int warp_grid = 4;
  int view_size = 56;
  std::string warp_polarity = "negative"; // warped views repel ("negative") or attract
  double momentum = 0.9;
  double weight_decay = 1e-4;
};

struct RunConfig {
  DataConfig data;
  ModelConfig model;
  TrainSection train;
  EvalSection eval;
  PretrainSection pretrain;

  int resolved_crop_size() const { return data.crop_size > 0 ? data.crop_size : model.input_resolution; }
  AugmentConfig augment_config() const {
    return AugmentConfig{resolved_crop_size(), data.crop_padding, data.hflip_probability};
  }
  Normalization normalization() const {
    Normalization n;
    for (int c = 0; c < 3; ++c) {
      n.mean[static_cast<std::size_t>(c)] = static_cast<float>(mean_at(c));
      n.std[static_cast<std::size_t>(c)] = static_cast<float>(std_at(c));
    }
    return n;
  }
  double mean_at(int c) const { return data.mean[static_cast<std::size_t>(c)]; }
  double std_at(int c) const { return data.std[static_cast<std::size_t>(c)]; }
  void validate() const;
};

// Sectioned plain-text config: [data] / [model] / [train] / [eval] /
// [pretrain], key = value lines, '#' or ';' comments. Unknown sections or
// keys are errors.
RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::filesystem::path& path);

// Fixed-order rendering of every key; input to the config hash.
std::string canonical_config_text(const RunConfig& config);
std::string config_hash(const RunConfig& config);

} // namespace exprkit
