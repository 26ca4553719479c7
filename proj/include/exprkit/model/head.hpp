// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "exprkit/dataset/label_space.hpp"
#include "exprkit/error.hpp"

namespace exprkit {

// Spatial down-sampling head replacing global average pooling: n_conv
// stride-2 convolutions, then all spatial positions flattened into one
// feature vector feeding a single fully-connected classifier.
struct HeadConfig {
  int n_conv = 2;
  int kernel = 2;
  int stride = 2;
  int hidden_channels = 256;
  int n_classes = kNumClasses;

  void validate() const {
    if (n_conv < 1) throw ConfigError("head n_conv must be >= 1");
    if (kernel < 1 || stride < 1) throw ConfigError("head kernel/stride must be >= 1");
    if (hidden_channels < 1) throw ConfigError("head hidden_channels must be >= 1");
    if (n_classes < 1) throw ConfigError("head n_classes must be >= 1");
  }
  bool operator==(const HeadConfig&) const = default;
};

// Flattened classifier input width for a feature map of h x w x c.
// Each conv uses valid floor arithmetic: out = (in - kernel)/stride + 1.
inline int head_output_shape(int h, int w, int /*c*/, const HeadConfig& head) {
  head.validate();
  for (int i = 0; i < head.n_conv; ++i) {
    if (h < head.kernel || w < head.kernel)
      throw ShapeError("head conv" + std::to_string(i + 1) + ": spatial " + std::to_string(h) +
                       "x" + std::to_string(w) + " below kernel " + std::to_string(head.kernel));
    h = (h - head.kernel) / head.stride + 1;
    w = (w - head.kernel) / head.stride + 1;
  }
  return h * w * head.hidden_channels;
}

} // namespace exprkit
