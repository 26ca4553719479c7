// SPDX-License-Identifier: Apache-2.0
#include "exprkit/dataset/loader.hpp"

#include "exprkit/dataset/annotations.hpp"
#include "exprkit/error.hpp"

namespace exprkit {

FrameDataset FrameDataset::load(const std::filesystem::path& data_root, const std::string& split) {
  const std::filesystem::path ann_dir = data_root / "annotations" / split;
  const std::filesystem::path image_root = data_root / "images";
  FrameDataset ds;
  const auto tracks = load_annotation_dir(ann_dir, LabelSpace::canonical());
  ds.index_ = build_index(tracks, image_root);
  return ds;
}

const ImageU8& FrameDataset::image(const FrameSample& sample) const {
  const std::string key = sample.image_ref.string();
  auto it = cache_.find(key);
  if (it == cache_.end()) it = cache_.emplace(key, read_jpeg(sample.image_ref)).first;
  return it->second;
}

} // namespace exprkit
