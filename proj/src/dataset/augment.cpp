// SPDX-License-Identifier: Apache-2.0
#include "exprkit/dataset/augment.hpp"

#include "exprkit/error.hpp"

namespace exprkit {

void AugmentConfig::validate() const {
  if (crop_size <= 0) throw ConfigError("crop_size must be > 0");
  if (crop_padding < 0) throw ConfigError("crop_padding must be >= 0");
  if (hflip_probability < 0.0 || hflip_probability > 1.0)
    throw ConfigError("hflip_probability must be in [0,1]");
}

ImageU8 hflip(const ImageU8& image) {
  ImageU8 out(image.h, image.w);
  for (int y = 0; y < image.h; ++y)
    for (int x = 0; x < image.w; ++x)
      for (int c = 0; c < 3; ++c) out.at(y, x, c) = image.at(y, image.w - 1 - x, c);
  return out;
}

ImageU8 augment(const ImageU8& image, const AugmentConfig& config, RngStream& rng) {
  config.validate();
  const int pad = config.crop_padding;
  const int crop = config.crop_size;
  const int ph = image.h + 2 * pad;
  const int pw = image.w + 2 * pad;
  if (ph < crop || pw < crop)
    throw ConfigError("image " + std::to_string(image.h) + "x" + std::to_string(image.w) +
                      " smaller than crop " + std::to_string(crop) + " after padding");

  const int oy = static_cast<int>(rng.uniform_u64(static_cast<std::uint64_t>(ph - crop + 1)));
  const int ox = static_cast<int>(rng.uniform_u64(static_cast<std::uint64_t>(pw - crop + 1)));
  const bool flip = rng.bernoulli(config.hflip_probability);

  ImageU8 out(crop, crop);
  for (int y = 0; y < crop; ++y) {
    const int sy = oy + y - pad;
    for (int x = 0; x < crop; ++x) {
      const int sx = ox + x - pad;
      const int dx = flip ? crop - 1 - x : x;
      if (sy < 0 || sy >= image.h || sx < 0 || sx >= image.w) continue; // zero padding
      for (int c = 0; c < 3; ++c) out.at(y, dx, c) = image.at(sy, sx, c);
    }
  }
  return out;
}

} // namespace exprkit
