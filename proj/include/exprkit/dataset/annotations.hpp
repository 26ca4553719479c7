// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "exprkit/dataset/label_space.hpp"

namespace exprkit {

// Per-video sequence of per-frame labels. Labels are canonical class ids,
// or kInvalidLabel for frames carrying no annotation.
struct AnnotationTrack {
  std::string video_id;
  std::vector<int> labels;
  int frame_count() const { return static_cast<int>(labels.size()); }
};

// Parses one annotation file body: a comma-separated class-name header line
// (any permutation of the eight canonical names, case-insensitive) followed
// by one integer per frame, -1 meaning invalid. Ids are remapped from the
// header order to the canonical order.
AnnotationTrack parse_annotation_file(const std::string& text, const LabelSpace& space,
                                      const std::string& video_id = "");

// Inverse of the parser: writes labels using `header` order (defaults to
// canonical order). parse -> serialize with the original header reproduces
// the data lines of the input.
std::string serialize_annotation(const AnnotationTrack& track, const LabelSpace& space,
                                 const std::vector<std::string>& header = {});

// Loads every "<video_id>.txt" under a split directory, sorted by video id.
std::vector<AnnotationTrack> load_annotation_dir(const std::filesystem::path& split_dir,
                                                 const LabelSpace& space);

} // namespace exprkit
