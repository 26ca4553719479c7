// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "exprkit/dataset/annotations.hpp"
#include "exprkit/image.hpp"

namespace exprkit {

// Desk-scale stand-in for the license-gated real data. Each video carries one
// class; every class gets a distinct color + texture pattern with per-frame
// drift and noise, so the classes are separable but frames are not identical.
struct SynthSummary {
  int n_videos = 0;
  int frames_per_video = 0;
  std::filesystem::path annotations_dir;
  std::filesystem::path image_root;
  std::vector<std::string> video_ids;
};

// Layout written under out_root:
//   annotations/<split>/<video_id>.txt   (Aff-Wild2-style header order)
//   images/<video_id>/%05d.jpg
// Fully deterministic given seed.
SynthSummary synthesize_dataset(const std::filesystem::path& out_root, const std::string& split,
                                int n_videos, int frames_per_video, int image_size,
                                std::uint64_t seed);

// Pattern for one frame; exposed for tests.
ImageU8 synth_frame(int class_id, int video_ordinal, int frame_index, int image_size,
                    std::uint64_t seed);

} // namespace exprkit
