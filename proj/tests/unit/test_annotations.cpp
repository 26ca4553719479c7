// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "exprkit/dataset/annotations.hpp"
#include "exprkit/error.hpp"

using namespace exprkit;

namespace {
const std::string kHeader = "Neutral,Anger,Disgust,Fear,Happiness,Sadness,Surprise,Other";
}

TEST_CASE("parser remaps header order onto the canonical label space") {
  const auto track =
      parse_annotation_file(kHeader + "\n0\n1\n-1\n", LabelSpace::canonical(), "vid");
  REQUIRE(track.frame_count() == 3);
  CHECK(track.labels[0] == 6); // Neutral -> canonical id 6
  CHECK(track.labels[1] == 0); // Anger -> canonical id 0
  CHECK(track.labels[2] == kInvalidLabel);
  CHECK(track.video_id == "vid");
}

TEST_CASE("canonical-order header is the identity mapping") {
  const auto track = parse_annotation_file(
      "anger,disgust,fear,happiness,sadness,surprise,neutral,other\n3\n7\n",
      LabelSpace::canonical());
  CHECK(track.labels[0] == 3);
  CHECK(track.labels[1] == 7);
}

TEST_CASE("parser rejects malformed files") {
  const auto& space = LabelSpace::canonical();
  CHECK_THROWS_AS(parse_annotation_file("", space), FormatError);
  CHECK_THROWS_AS(parse_annotation_file(kHeader + "\n", space), FormatError); // no data lines
  CHECK_THROWS_AS(parse_annotation_file(kHeader + "\n9\n", space), FormatError);
  CHECK_THROWS_AS(parse_annotation_file(kHeader + "\n-2\n", space), FormatError);
  CHECK_THROWS_AS(parse_annotation_file(kHeader + "\nx\n", space), FormatError);
  CHECK_THROWS_AS(
      parse_annotation_file("Neutral,Anger,Disgust,Fear,Happiness,Sadness,Surprise,Smile\n0\n",
                            space),
      FormatError);
  CHECK_THROWS_AS(
      parse_annotation_file("Neutral,Neutral,Disgust,Fear,Happiness,Sadness,Surprise,Other\n0\n",
                            space),
      FormatError);
}

TEST_CASE("parse -> serialize with the original header reproduces the data lines") {
  RngStream rng(3);
  std::vector<std::string> header = {"Neutral",  "Anger",   "Disgust",  "Fear",
                                     "Happiness", "Sadness", "Surprise", "Other"};
  std::string text;
  for (const auto& name : header) text += (text.empty() ? "" : ",") + name;
  text += "\n";
  for (int i = 0; i < 50; ++i) {
    const int v = static_cast<int>(rng.uniform_u64(9)) - 1; // -1..7
    text += std::to_string(v) + "\n";
  }
  const auto track = parse_annotation_file(text, LabelSpace::canonical());
  const std::string round = serialize_annotation(track, LabelSpace::canonical(), header);
  CHECK(round == text);
}
