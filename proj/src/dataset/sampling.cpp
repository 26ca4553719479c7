// SPDX-License-Identifier: Apache-2.0
#include "exprkit/dataset/sampling.hpp"

#include "exprkit/error.hpp"

namespace exprkit {

std::vector<FrameSample> temporal_subsample(const std::vector<FrameSample>& samples,
                                            int stride, RngStream& rng) {
  if (stride < 1) throw ConfigError("temporal stride must be >= 1");
  std::vector<FrameSample> out;
  std::size_t i = 0;
  while (i < samples.size()) {
    // run of one video
    std::size_t end = i + 1;
    while (end < samples.size() && samples[end].video_id == samples[i].video_id) ++end;
    for (std::size_t g = i; g < end; g += static_cast<std::size_t>(stride)) {
      const std::size_t gsize = std::min<std::size_t>(static_cast<std::size_t>(stride), end - g);
      out.push_back(samples[g + rng.uniform_u64(gsize)]);
    }
    i = end;
  }
  return out;
}

} // namespace exprkit
