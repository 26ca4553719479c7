// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "exprkit/nn/layers.hpp"

namespace exprkit {

enum class BlockKind { basic, bottleneck };

struct StageSpec {
  int blocks = 2;
  int out_channels = 64; // block output width (after expansion for bottleneck)
  int stride = 1;
};

// Stem + four stages of residual blocks. The reference family (18- and
// 50-layer) has cumulative stride 32 and feature widths 512 / 2048.
struct BackboneSpec {
  std::string name;
  int input_resolution = 224;
  BlockKind kind = BlockKind::basic;
  int stem_channels = 64;
  int stem_kernel = 7;
  int stem_stride = 2;
  int stem_pad = 3;
  bool stem_pool = true; // 3x3/2 max pool after the stem
  std::array<StageSpec, 4> stages{StageSpec{2, 64, 1}, StageSpec{2, 128, 2},
                                  StageSpec{2, 256, 2}, StageSpec{2, 512, 2}};

  int feature_channels() const { return stages[3].out_channels; }
  int cumulative_stride() const;
  // final feature map height/width at input_resolution (square inputs)
  int feature_dim() const;
  void validate() const;
};

BackboneSpec resnet18_spec();
BackboneSpec resnet50_spec();

// Registered reference backbones, by name ("res18", "res50").
const std::map<std::string, BackboneSpec>& backbone_registry();
BackboneSpec backbone_by_name(const std::string& name);

// One residual block; covers both the 2-conv basic form and the 3-conv
// bottleneck form behind a kind flag.
template <typename T>
class ResidualBlock {
public:
  ResidualBlock(const std::string& name, BlockKind kind, int in_ch, int out_ch, int stride)
      : kind_(kind) {
    const int mid = kind == BlockKind::bottleneck ? out_ch / 4 : out_ch;
    if (kind_ == BlockKind::basic) {
      conv1_.emplace(name + ".conv1", in_ch, mid, 3, stride, 1, false);
      bn1_.emplace(name + ".bn1", mid);
      conv2_.emplace(name + ".conv2", mid, out_ch, 3, 1, 1, false);
      bn2_.emplace(name + ".bn2", out_ch);
    } else {
      conv1_.emplace(name + ".conv1", in_ch, mid, 1, 1, 0, false);
      bn1_.emplace(name + ".bn1", mid);
      conv2_.emplace(name + ".conv2", mid, mid, 3, stride, 1, false);
      bn2_.emplace(name + ".bn2", mid);
      conv3_.emplace(name + ".conv3", mid, out_ch, 1, 1, 0, false);
      bn3_.emplace(name + ".bn3", out_ch);
    }
    if (stride != 1 || in_ch != out_ch) {
      down_conv_.emplace(name + ".downsample.conv", in_ch, out_ch, 1, stride, 0, false);
      down_bn_.emplace(name + ".downsample.bn", out_ch);
    }
  }

  Tensor<T> forward(const Tensor<T>& x, bool training, bool cache) {
    Tensor<T> y = bn1_->forward(conv1_->forward(x, cache), training, cache);
    y = relu1_.forward(y, cache);
    y = bn2_->forward(conv2_->forward(y, cache), training, cache);
    if (kind_ == BlockKind::bottleneck) {
      y = relu2_.forward(y, cache);
      y = bn3_->forward(conv3_->forward(y, cache), training, cache);
    }
    Tensor<T> identity =
        down_conv_ ? down_bn_->forward(down_conv_->forward(x, cache), training, cache) : x;
    if (y.shape() != identity.shape())
      throw ShapeError("residual add shape mismatch " + y.shape_str() + " vs " +
                       identity.shape_str());
    T* yd = y.data();
    const T* id = identity.data();
    for (std::int64_t i = 0; i < y.numel(); ++i) yd[i] += id[i];
    return relu_out_.forward(y, cache);
  }

  Tensor<T> backward(const Tensor<T>& dy, bool need_dx) {
    Tensor<T> d = relu_out_.backward(dy);
    Tensor<T> dx_short;
    if (down_conv_) {
      dx_short = down_conv_->backward(down_bn_->backward(d, true), need_dx);
    } else if (need_dx) {
      dx_short = d;
    }
    Tensor<T> dm;
    if (kind_ == BlockKind::bottleneck) {
      dm = conv3_->backward(bn3_->backward(d, true), true);
      dm = relu2_.backward(dm);
    } else {
      dm = d;
    }
    dm = conv2_->backward(bn2_->backward(dm, true), true);
    dm = relu1_.backward(dm);
    dm = conv1_->backward(bn1_->backward(dm, true), need_dx);
    if (!need_dx) return Tensor<T>();
    T* a = dm.data();
    const T* b = dx_short.data();
    for (std::int64_t i = 0; i < dm.numel(); ++i) a[i] += b[i];
    return dm;
  }

  void collect(std::vector<Param<T>*>& out) {
    conv1_->collect(out);
    bn1_->collect(out);
    conv2_->collect(out);
    bn2_->collect(out);
    if (kind_ == BlockKind::bottleneck) {
      conv3_->collect(out);
      bn3_->collect(out);
    }
    if (down_conv_) {
      down_conv_->collect(out);
      down_bn_->collect(out);
    }
  }

  void set_stats_frozen(bool frozen) {
    bn1_->stats_frozen = frozen;
    bn2_->stats_frozen = frozen;
    if (bn3_) bn3_->stats_frozen = frozen;
    if (down_bn_) down_bn_->stats_frozen = frozen;
  }

private:
  BlockKind kind_;
  std::optional<Conv2d<T>> conv1_, conv2_, conv3_, down_conv_;
  std::optional<BatchNorm2d<T>> bn1_, bn2_, bn3_, down_bn_;
  ReLU<T> relu1_, relu2_, relu_out_;
};

// Backbone feature extractor. Parameters carry the canonical names
// backbone.stem.* and backbone.stage{1..4}.block{1..}.*.
//
// Addresses of collected Param pointers must stay valid, so a Backbone is
// pinned in memory (no copy, no move) once constructed.
template <typename T>
class Backbone {
public:
  explicit Backbone(const BackboneSpec& spec)
      : spec_(spec), stem_conv_("backbone.stem.conv", 3, spec.stem_channels, spec.stem_kernel,
                                spec.stem_stride, spec.stem_pad, false),
        stem_bn_("backbone.stem.bn", spec.stem_channels), stem_pool_(3, 2, 1) {
    spec_.validate();
    int in_ch = spec.stem_channels;
    for (int s = 0; s < 4; ++s) {
      const StageSpec& st = spec.stages[static_cast<std::size_t>(s)];
      auto& blocks = stages_[static_cast<std::size_t>(s)];
      blocks.reserve(static_cast<std::size_t>(st.blocks));
      for (int b = 0; b < st.blocks; ++b) {
        const std::string name =
            "backbone.stage" + std::to_string(s + 1) + ".block" + std::to_string(b + 1);
        blocks.emplace_back(name, spec.kind, in_ch, st.out_channels, b == 0 ? st.stride : 1);
        in_ch = st.out_channels;
      }
    }
  }
  Backbone(const Backbone&) = delete;
  Backbone& operator=(const Backbone&) = delete;

  // freeze_k in [0,4]: stem and stages 1..k run in inference mode without
  // caching; stages above it train and cache when `training` is set.
  Tensor<T> forward_features(const Tensor<T>& x, bool training, int freeze_k) {
    const bool stem_live = training && freeze_k < 1;
    Tensor<T> y = stem_bn_.forward(stem_conv_.forward(x, stem_live), stem_live, stem_live);
    y = stem_relu_.forward(y, stem_live);
    if (spec_.stem_pool) y = stem_pool_.forward(y, stem_live);
    for (int s = 0; s < 4; ++s) {
      const bool live = training && (s + 1) > freeze_k;
      for (auto& block : stages_[static_cast<std::size_t>(s)]) y = block.forward(y, live, live);
    }
    return y;
  }

  // Backpropagates through stages freeze_k+1..4 (and the stem when nothing
  // is frozen); gradient flow stops at the frozen prefix.
  void backward_features(const Tensor<T>& dy, int freeze_k) {
    if (freeze_k >= 4) return; // head-only training
    Tensor<T> d = dy;
    const int first_live_stage = freeze_k; // 0-based stage index
    for (int s = 3; s >= first_live_stage; --s) {
      auto& blocks = stages_[static_cast<std::size_t>(s)];
      for (int b = static_cast<int>(blocks.size()) - 1; b >= 0; --b) {
        const bool lowest_live = (s == first_live_stage && b == 0);
        const bool need_dx = !(lowest_live && freeze_k > 0);
        d = blocks[static_cast<std::size_t>(b)].backward(d, need_dx);
        if (!need_dx) return;
      }
    }
    // freeze_k == 0: the stem trains too
    if (spec_.stem_pool) d = stem_pool_.backward(d);
    d = stem_relu_.backward(d);
    stem_conv_.backward(stem_bn_.backward(d, true), false);
  }

  void collect(std::vector<Param<T>*>& out) {
    stem_conv_.collect(out);
    stem_bn_.collect(out);
    for (auto& stage : stages_)
      for (auto& block : stage) block.collect(out);
  }

  void apply_freeze(int freeze_k) {
    stem_bn_.stats_frozen = freeze_k >= 1;
    for (int s = 0; s < 4; ++s)
      for (auto& block : stages_[static_cast<std::size_t>(s)])
        block.set_stats_frozen(s + 1 <= freeze_k);
  }

  const BackboneSpec& spec() const { return spec_; }

private:
  BackboneSpec spec_;
  Conv2d<T> stem_conv_;
  BatchNorm2d<T> stem_bn_;
  ReLU<T> stem_relu_;
  MaxPool2d<T> stem_pool_;
  std::array<std::vector<ResidualBlock<T>>, 4> stages_;
};

} // namespace exprkit
