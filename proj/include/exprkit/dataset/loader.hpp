// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "exprkit/dataset/frame_index.hpp"
#include "exprkit/image.hpp"

namespace exprkit {

// A materialized split: flat frame index plus an in-memory decode cache.
// Desk-scale datasets fit comfortably; the cache is append-only.
class FrameDataset {
public:
  static FrameDataset load(const std::filesystem::path& data_root, const std::string& split);

  const std::vector<FrameSample>& samples() const { return index_.samples; }
  const std::vector<SkipReportEntry>& skip_report() const { return index_.skip_report; }
  std::size_t size() const { return index_.samples.size(); }
  bool empty() const { return index_.samples.empty(); }

  const ImageU8& image(const FrameSample& sample) const;

private:
  FrameIndex index_;
  mutable std::unordered_map<std::string, ImageU8> cache_;
};

} // namespace exprkit
