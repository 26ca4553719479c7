// SPDX-License-Identifier: Apache-2.0
#include "exprkit/dataset/frame_index.hpp"

#include <algorithm>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "exprkit/error.hpp"

namespace exprkit {

std::filesystem::path frame_image_path(const std::filesystem::path& image_root,
                                       const std::string& video_id, int frame_index) {
  char name[16];
  std::snprintf(name, sizeof(name), "%05d.jpg", frame_index + 1);
  return image_root / video_id / name;
}

FrameIndex build_index(const std::vector<AnnotationTrack>& tracks,
                       const std::filesystem::path& image_root) {
  if (!std::filesystem::is_directory(image_root))
    throw IOError("image root not found: " + image_root.string());

  std::vector<const AnnotationTrack*> ordered;
  ordered.reserve(tracks.size());
  for (const auto& t : tracks) ordered.push_back(&t);
  std::sort(ordered.begin(), ordered.end(),
            [](const AnnotationTrack* a, const AnnotationTrack* b) {
              return a->video_id < b->video_id;
            });

  FrameIndex index;
  for (const AnnotationTrack* track : ordered) {
    int missing = 0;
    for (int f = 0; f < track->frame_count(); ++f) {
      const int label = track->labels[static_cast<std::size_t>(f)];
      if (label == kInvalidLabel) continue;
      std::filesystem::path img = frame_image_path(image_root, track->video_id, f);
      if (!std::filesystem::exists(img)) {
        ++missing;
        continue;
      }
      index.samples.push_back({track->video_id, f, std::move(img), label});
    }
    if (missing > 0) index.skip_report.push_back({track->video_id, missing});
  }
  return index;
}

std::string skip_report_jsonl(const std::vector<SkipReportEntry>& entries) {
  std::string out;
  for (const auto& e : entries) {
    nlohmann::json j;
    j["video_id"] = e.video_id;
    j["missing"] = e.missing;
    out += j.dump();
    out += '\n';
  }
  return out;
}

} // namespace exprkit
