// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "exprkit/model/head.hpp"
#include "exprkit/model/weights.hpp"

namespace exprkit {

// Versioned checkpoint container. Serialized as MessagePack with the raw
// float32 array bytes embedded, so save -> load round-trips bit-exact.
struct Checkpoint {
  std::uint32_t format_version = 1;
  std::string config_hash;
  std::string config_text;
  std::uint64_t iteration = 0;
  std::string pretext;                 // "" for supervised, "contrastive-warp" for pretraining
  std::string weights_origin = "random";
  std::string backbone_name;
  int input_resolution = 224;
  HeadConfig head;
  std::array<float, 3> norm_mean{0.5f, 0.5f, 0.5f};
  std::array<float, 3> norm_std{0.5f, 0.5f, 0.5f};
  NamedArrays arrays;
};

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

} // namespace exprkit
