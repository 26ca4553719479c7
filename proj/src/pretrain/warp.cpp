// SPDX-License-Identifier: Apache-2.0
#include "exprkit/pretrain/warp.hpp"

#include <algorithm>
#include <cmath>

#include "exprkit/error.hpp"

namespace exprkit {

void WarpField::validate() const {
  if (grid < 2) throw ConfigError("warp grid must be >= 2");
  if (magnitude < 0) throw ConfigError("warp magnitude must be >= 0");
  if (disp.size() != static_cast<std::size_t>(grid) * grid)
    throw ConfigError("warp field has wrong control-point count");
  for (const auto& d : disp)
    if (std::abs(d[0]) > magnitude || std::abs(d[1]) > magnitude)
      throw ConfigError("warp displacement exceeds magnitude bound");
}

WarpField random_warp_field(int grid, double magnitude, RngStream& rng) {
  if (grid < 2) throw ConfigError("warp grid must be >= 2");
  if (magnitude < 0) throw ConfigError("warp magnitude must be >= 0");
  WarpField field;
  field.grid = grid;
  field.magnitude = magnitude;
  field.disp.resize(static_cast<std::size_t>(grid) * grid);
  for (auto& d : field.disp) {
    d[0] = rng.uniform_range(-magnitude, magnitude);
    d[1] = rng.uniform_range(-magnitude, magnitude);
  }
  return field;
}

std::array<double, 2> dense_displacement(const WarpField& field, int h, int w, double y,
                                         double x) {
  const int g = field.grid;
  // control points span the full image plane
  const double gy = h > 1 ? y / (h - 1) * (g - 1) : 0.0;
  const double gx = w > 1 ? x / (w - 1) * (g - 1) : 0.0;
  const int y0 = std::min(static_cast<int>(gy), g - 2);
  const int x0 = std::min(static_cast<int>(gx), g - 2);
  const double fy = gy - y0;
  const double fx = gx - x0;
  std::array<double, 2> out{0.0, 0.0};
  for (int c = 0; c < 2; ++c) {
    const double v00 = field.disp[static_cast<std::size_t>(y0) * g + x0][static_cast<std::size_t>(c)];
    const double v01 = field.disp[static_cast<std::size_t>(y0) * g + x0 + 1][static_cast<std::size_t>(c)];
    const double v10 = field.disp[static_cast<std::size_t>(y0 + 1) * g + x0][static_cast<std::size_t>(c)];
    const double v11 = field.disp[static_cast<std::size_t>(y0 + 1) * g + x0 + 1][static_cast<std::size_t>(c)];
    out[static_cast<std::size_t>(c)] =
        v00 * (1 - fy) * (1 - fx) + v01 * (1 - fy) * fx + v10 * fy * (1 - fx) + v11 * fy * fx;
  }
  return out;
}

namespace {
float sample_bilinear_clamped(const ImageF& img, double y, double x, int c) {
  y = std::clamp(y, 0.0, static_cast<double>(img.h - 1));
  x = std::clamp(x, 0.0, static_cast<double>(img.w - 1));
  const int y0 = static_cast<int>(y);
  const int x0 = static_cast<int>(x);
  const int y1 = std::min(y0 + 1, img.h - 1);
  const int x1 = std::min(x0 + 1, img.w - 1);
  const double fy = y - y0;
  const double fx = x - x0;
  const double top = img.at(y0, x0, c) * (1 - fx) + img.at(y0, x1, c) * fx;
  const double bot = img.at(y1, x0, c) * (1 - fx) + img.at(y1, x1, c) * fx;
  return static_cast<float>(top * (1 - fy) + bot * fy);
}
} // namespace

ImageF warp_image(const ImageF& img, const WarpField& field) {
  field.validate();
  ImageF out(img.h, img.w);
  for (int y = 0; y < img.h; ++y) {
    for (int x = 0; x < img.w; ++x) {
      const auto d = dense_displacement(field, img.h, img.w, y, x);
      const double sx = x + d[0];
      const double sy = y + d[1];
      for (int c = 0; c < 3; ++c) out.at(y, x, c) = sample_bilinear_clamped(img, sy, sx, c);
    }
  }
  return out;
}

ImageF random_warp(const ImageF& img, double magnitude, int grid, RngStream& rng) {
  const WarpField field = random_warp_field(grid, magnitude, rng);
  return warp_image(img, field);
}

} // namespace exprkit
