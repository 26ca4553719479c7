// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <vector>

#include "exprkit/image.hpp"
#include "exprkit/rng.hpp"

namespace exprkit {

// G x G grid of 2-d control displacements (dx, dy) in pixels, each bounded
// by magnitude in the infinity norm. The dense field is the bilinear
// interpolation of the control grid over the image plane, so it inherits
// the bound; local warps of a face stand in for muscle movements.
struct WarpField {
  int grid = 4;
  double magnitude = 0.0;
  std::vector<std::array<double, 2>> disp; // row-major grid x grid

  void validate() const;
};

WarpField random_warp_field(int grid, double magnitude, RngStream& rng);

// Dense displacement at (y, x) for an h x w image.
std::array<double, 2> dense_displacement(const WarpField& field, int h, int w, double y, double x);

// Backward warping with bilinear sampling and edge clamping:
//   out(y, x) = in(y + dy(y,x), x + dx(y,x))
// A zero field is the exact identity.
ImageF warp_image(const ImageF& img, const WarpField& field);

ImageF random_warp(const ImageF& img, double magnitude, int grid, RngStream& rng);

} // namespace exprkit
