// SPDX-License-Identifier: Apache-2.0
#include "exprkit/dataset/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "exprkit/error.hpp"
#include "exprkit/rng.hpp"

namespace exprkit {

namespace {

struct Rgb {
  int r, g, b;
};

constexpr Rgb kClassColor[kNumClasses] = {
    {220, 45, 45},   // anger
    {60, 185, 60},   // disgust
    {135, 60, 205},  // fear
    {240, 205, 40},  // happiness
    {50, 90, 220},   // sadness
    {240, 130, 30},  // surprise
    {150, 150, 150}, // neutral
    {55, 200, 200},  // other
};

int clamp_u8(int v) { return std::clamp(v, 0, 255); }

const std::vector<std::string>& affwild2_header() {
  static const std::vector<std::string> header = {"Neutral",  "Anger",   "Disgust",  "Fear",
                                                  "Happiness", "Sadness", "Surprise", "Other"};
  return header;
}

} // namespace

ImageU8 synth_frame(int class_id, int video_ordinal, int frame_index, int image_size,
                    std::uint64_t seed) {
  RngStream noise = RngStream(seed).derive("synth-noise", static_cast<std::uint64_t>(video_ordinal),
                                           static_cast<std::uint64_t>(frame_index));
  const Rgb base = kClassColor[static_cast<std::size_t>(class_id)];
  const int period = 8 + 4 * (class_id / 4);
  const int texture = class_id % 4;
  // slow drift makes frames of one video similar but not identical
  const int phase = (video_ordinal * 3 + frame_index) % (2 * period);

  ImageU8 img(image_size, image_size);
  for (int y = 0; y < image_size; ++y) {
    for (int x = 0; x < image_size; ++x) {
      int stripe = 0;
      switch (texture) {
      case 0: stripe = ((y + phase) / period) % 2; break;
      case 1: stripe = ((x + phase) / period) % 2; break;
      case 2: stripe = (((y + phase) / period) + ((x + phase) / period)) % 2; break;
      default: stripe = ((x + y + phase) / period) % 2; break;
      }
      const double scale = stripe ? 1.0 : 0.45;
      const int n = static_cast<int>(noise.uniform_u64(17)) - 8;
      img.at(y, x, 0) = static_cast<std::uint8_t>(clamp_u8(static_cast<int>(base.r * scale) + n));
      img.at(y, x, 1) = static_cast<std::uint8_t>(clamp_u8(static_cast<int>(base.g * scale) + n));
      img.at(y, x, 2) = static_cast<std::uint8_t>(clamp_u8(static_cast<int>(base.b * scale) + n));
    }
  }
  return img;
}

SynthSummary synthesize_dataset(const std::filesystem::path& out_root, const std::string& split,
                                int n_videos, int frames_per_video, int image_size,
                                std::uint64_t seed) {
  if (n_videos <= 0 || frames_per_video <= 0 || image_size <= 0)
    throw ConfigError("synthesize_dataset: all counts must be positive");

  SynthSummary summary;
  summary.n_videos = n_videos;
  summary.frames_per_video = frames_per_video;
  summary.annotations_dir = out_root / "annotations" / split;
  summary.image_root = out_root / "images";

  std::error_code ec;
  std::filesystem::create_directories(summary.annotations_dir, ec);
  if (ec) throw IOError("cannot create " + summary.annotations_dir.string());
  std::filesystem::create_directories(summary.image_root, ec);
  if (ec) throw IOError("cannot create " + summary.image_root.string());

  const LabelSpace& space = LabelSpace::canonical();
  for (int v = 0; v < n_videos; ++v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "video_%03d", v);
    const std::string video_id(buf);
    summary.video_ids.push_back(video_id);
    const int class_id = v % kNumClasses; // balanced up to rounding

    AnnotationTrack track;
    track.video_id = video_id;
    track.labels.assign(static_cast<std::size_t>(frames_per_video), class_id);

    const std::filesystem::path ann_path = summary.annotations_dir / (video_id + ".txt");
    std::ofstream ann(ann_path, std::ios::binary);
    if (!ann) throw IOError("cannot write " + ann_path.string());
    ann << serialize_annotation(track, space, affwild2_header());
    ann.close();

    const std::filesystem::path video_dir = summary.image_root / video_id;
    std::filesystem::create_directories(video_dir, ec);
    if (ec) throw IOError("cannot create " + video_dir.string());
    for (int f = 0; f < frames_per_video; ++f) {
      const ImageU8 frame = synth_frame(class_id, v, f, image_size, seed);
      std::snprintf(buf, sizeof(buf), "%05d.jpg", f + 1);
      write_jpeg(video_dir / buf, frame);
    }
  }
  return summary;
}

} // namespace exprkit
