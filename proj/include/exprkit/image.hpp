// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "exprkit/error.hpp"

namespace exprkit {

// Interleaved HWC images, RGB channel order.
struct ImageU8 {
  int h = 0;
  int w = 0;
  std::vector<std::uint8_t> data; // h*w*3

  ImageU8() = default;
  ImageU8(int h_, int w_) : h(h_), w(w_), data(static_cast<std::size_t>(h_) * w_ * 3, 0) {}
  std::uint8_t& at(int y, int x, int c) { return data[(static_cast<std::size_t>(y) * w + x) * 3 + c]; }
  std::uint8_t at(int y, int x, int c) const { return data[(static_cast<std::size_t>(y) * w + x) * 3 + c]; }
};

struct ImageF {
  int h = 0;
  int w = 0;
  std::vector<float> data; // h*w*3

  ImageF() = default;
  ImageF(int h_, int w_) : h(h_), w(w_), data(static_cast<std::size_t>(h_) * w_ * 3, 0.f) {}
  float& at(int y, int x, int c) { return data[(static_cast<std::size_t>(y) * w + x) * 3 + c]; }
  float at(int y, int x, int c) const { return data[(static_cast<std::size_t>(y) * w + x) * 3 + c]; }
};

ImageU8 read_jpeg(const std::filesystem::path& path);
void write_jpeg(const std::filesystem::path& path, const ImageU8& img, int quality = 95);

ImageF to_float01(const ImageU8& img);
ImageU8 to_u8(const ImageF& img); // clamps to [0,1] then scales

// Bilinear resize, half-pixel-center convention.
ImageF resize_bilinear(const ImageF& img, int out_h, int out_w);

ImageF center_crop(const ImageF& img, int size);

// Deterministic evaluation preprocessing: shorter side resized to `size`,
// then center crop of size x size.
ImageF eval_preprocess(const ImageU8& img, int size);

} // namespace exprkit
