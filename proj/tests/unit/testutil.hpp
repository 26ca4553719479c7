// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <filesystem>
#include <functional>
#include <string>

#include "exprkit/model/assembly.hpp"
#include "exprkit/model/backbone.hpp"

namespace exprkit::testutil {

// Small 4-stage residual net for gradient checks and fast trainer tests:
// light stem, one basic block per stage, cumulative stride 16.
inline BackboneSpec tiny_backbone_spec(int input_resolution = 64) {
  BackboneSpec spec;
  spec.name = "tiny";
  spec.input_resolution = input_resolution;
  spec.kind = BlockKind::basic;
  spec.stem_channels = 8;
  spec.stem_kernel = 3;
  spec.stem_stride = 1;
  spec.stem_pad = 1;
  spec.stem_pool = false;
  spec.stages = {StageSpec{1, 8, 2}, StageSpec{1, 8, 2}, StageSpec{1, 16, 2},
                 StageSpec{1, 16, 2}};
  return spec;
}

inline HeadConfig tiny_head() {
  HeadConfig head;
  head.hidden_channels = 8;
  return head;
}

// Central finite difference of `loss_fn` w.r.t. one parameter component.
template <typename T>
double central_difference(Param<T>& param, std::size_t index,
                          const std::function<double()>& loss_fn, double step = 1e-5) {
  const T saved = param.value[index];
  param.value[index] = saved + static_cast<T>(step);
  const double plus = loss_fn();
  param.value[index] = saved - static_cast<T>(step);
  const double minus = loss_fn();
  param.value[index] = saved;
  return (plus - minus) / (2.0 * step);
}

inline double rel_error(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-8});
  return std::abs(a - b) / scale;
}

// Unique scratch directory under the build tree.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("exprkit_test_" + tag + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Deterministic random input batch in [-1, 1].
template <typename T>
Tensor<T> random_batch(int n, int c, int h, int w, std::uint64_t seed) {
  RngStream rng(seed);
  Tensor<T> t({n, c, h, w});
  for (std::int64_t i = 0; i < t.numel(); ++i)
    t[i] = static_cast<T>(rng.uniform_range(-1.0, 1.0));
  return t;
}

} // namespace exprkit::testutil
