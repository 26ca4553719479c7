// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "exprkit/dataset/frame_index.hpp"
#include "exprkit/error.hpp"
#include "exprkit/image.hpp"
#include "testutil.hpp"

using namespace exprkit;

namespace {

void touch_frame(const std::filesystem::path& root, const std::string& vid, int frame) {
  const auto path = frame_image_path(root, vid, frame);
  std::filesystem::create_directories(path.parent_path());
  write_jpeg(path, ImageU8(8, 8));
}

} // namespace

TEST_CASE("build_index keeps valid frames only, sorted, and reports missing files") {
  const auto root = testutil::scratch_dir("index");
  AnnotationTrack b{"vid_b", {0, kInvalidLabel, 2}};
  AnnotationTrack a{"vid_a", {5, 1}};
  touch_frame(root, "vid_b", 0);
  touch_frame(root, "vid_b", 2);
  touch_frame(root, "vid_a", 0); // frame 1 of vid_a missing on disk

  const FrameIndex index = build_index({b, a}, root);
  REQUIRE(index.samples.size() == 3);
  CHECK(index.samples[0].video_id == "vid_a");
  CHECK(index.samples[0].frame_index == 0);
  CHECK(index.samples[0].label == 5);
  CHECK(index.samples[1].video_id == "vid_b");
  CHECK(index.samples[2].video_id == "vid_b");
  CHECK(index.samples[2].frame_index == 2);

  REQUIRE(index.skip_report.size() == 1);
  CHECK(index.skip_report[0].video_id == "vid_a");
  CHECK(index.skip_report[0].missing == 1);
  CHECK(skip_report_jsonl(index.skip_report) == "{\"missing\":1,\"video_id\":\"vid_a\"}\n");
  std::filesystem::remove_all(root);
}

TEST_CASE("all-invalid track yields an empty index without error") {
  const auto root = testutil::scratch_dir("index_empty");
  AnnotationTrack t{"vid", {kInvalidLabel, kInvalidLabel, kInvalidLabel}};
  const FrameIndex index = build_index({t}, root);
  CHECK(index.samples.empty());
  CHECK(index.skip_report.empty());
  std::filesystem::remove_all(root);
}

TEST_CASE("missing image root raises IOError") {
  AnnotationTrack t{"vid", {0}};
  CHECK_THROWS_AS(build_index({t}, "/nonexistent/exprkit/image/root"), IOError);
}

TEST_CASE("image file names are 1-based and zero-padded") {
  CHECK(frame_image_path("root", "vid", 0) == std::filesystem::path("root/vid/00001.jpg"));
  CHECK(frame_image_path("root", "vid", 99) == std::filesystem::path("root/vid/00100.jpg"));
}
