// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "exprkit/dataset/frame_index.hpp"
#include "exprkit/rng.hpp"

namespace exprkit {

// Training-time temporal subsampling: within each consecutive group of
// `stride` samples of one video, exactly one is chosen uniformly at random;
// a trailing partial group contributes one of its members. Samples must be
// grouped per video and ordered by frame index (as build_index emits them).
std::vector<FrameSample> temporal_subsample(const std::vector<FrameSample>& samples,
                                            int stride, RngStream& rng);

} // namespace exprkit
