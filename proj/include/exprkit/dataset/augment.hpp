// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "exprkit/image.hpp"
#include "exprkit/rng.hpp"

namespace exprkit {

struct AugmentConfig {
  int crop_size = 224;
  int crop_padding = 8;
  double hflip_probability = 0.5;

  void validate() const;
};

// Training augmentation: zero-pad by crop_padding on every side, take a
// random crop_size x crop_size window, then flip horizontally with
// hflip_probability. Crop and flip move pixels without interpolation, so
// output values are a subset of the (padded) input values.
//
// Draw order from `rng` is pinned: y offset, x offset, flip coin.
ImageU8 augment(const ImageU8& image, const AugmentConfig& config, RngStream& rng);

ImageU8 hflip(const ImageU8& image);

} // namespace exprkit
