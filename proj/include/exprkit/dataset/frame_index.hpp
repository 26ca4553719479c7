// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "exprkit/dataset/annotations.hpp"

namespace exprkit {

// One (video, frame, image, label) unit. Frames with an invalid label never
// become FrameSamples.
struct FrameSample {
  std::string video_id;
  int frame_index = 0; // 0-based
  std::filesystem::path image_ref;
  int label = 0; // canonical class id
};

struct SkipReportEntry {
  std::string video_id;
  int missing = 0;
};

struct FrameIndex {
  std::vector<FrameSample> samples; // sorted by (video_id, frame_index)
  std::vector<SkipReportEntry> skip_report;
};

// Frame image path: <image_root>/<video_id>/<frame_index+1 padded to 5>.jpg
std::filesystem::path frame_image_path(const std::filesystem::path& image_root,
                                       const std::string& video_id, int frame_index);

// Builds the flat sample list over all valid frames whose image file exists;
// missing files are skipped and counted per video.
FrameIndex build_index(const std::vector<AnnotationTrack>& tracks,
                       const std::filesystem::path& image_root);

// Skip report as JSON lines: {"video_id":...,"missing":...}
std::string skip_report_jsonl(const std::vector<SkipReportEntry>& entries);

} // namespace exprkit
