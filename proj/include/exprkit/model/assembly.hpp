// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "exprkit/image.hpp"
#include "exprkit/model/backbone.hpp"
#include "exprkit/model/head.hpp"
#include "exprkit/rng.hpp"

namespace exprkit {

// Per-channel pixel normalization applied before the backbone; the constants
// travel with every checkpoint.
struct Normalization {
  std::array<float, 3> mean{0.5f, 0.5f, 0.5f};
  std::array<float, 3> std{0.5f, 0.5f, 0.5f};
  bool operator==(const Normalization&) const = default;
};

// Backbone + spatial down-sampling head + linear classifier, with a total
// canonical parameter registry and a stage freeze mask.
//
// Pinned in memory once constructed: the parameter registry holds raw
// pointers into the layer objects.
template <typename T>
class ModelAssembly {
public:
  ModelAssembly(const BackboneSpec& spec, const HeadConfig& head, std::uint64_t init_seed,
                const Normalization& norm = {})
      : backbone_(spec), head_cfg_(head), norm_(norm) {
    head_cfg_.validate();
    const int fd = spec.feature_dim();
    flat_width_ = head_output_shape(fd, fd, spec.feature_channels(), head_cfg_);

    int in_ch = spec.feature_channels();
    head_convs_.reserve(static_cast<std::size_t>(head_cfg_.n_conv));
    for (int i = 0; i < head_cfg_.n_conv; ++i) {
      head_convs_.emplace_back("head.conv" + std::to_string(i + 1), in_ch,
                               head_cfg_.hidden_channels, head_cfg_.kernel, head_cfg_.stride, 0,
                               true);
      in_ch = head_cfg_.hidden_channels;
    }
    head_relus_.resize(static_cast<std::size_t>(head_cfg_.n_conv));
    fc_.emplace("head.fc", flat_width_, head_cfg_.n_classes);

    backbone_.collect(params_);
    for (auto& conv : head_convs_) conv.collect(params_);
    fc_->collect(params_);
    init_parameters(init_seed);
  }
  ModelAssembly(const ModelAssembly&) = delete;
  ModelAssembly& operator=(const ModelAssembly&) = delete;

  // images: (B, 3, H, W), H = W = input_resolution, already normalized.
  Tensor<T> forward(const Tensor<T>& images, bool training) {
    if (images.ndim() != 4 || images.dim(1) != 3)
      throw ShapeError("forward: expected (B,3,H,W), got " + images.shape_str());
    if (images.dim(2) != backbone_.spec().input_resolution ||
        images.dim(3) != backbone_.spec().input_resolution)
      throw ShapeError("forward: input " + images.shape_str() + " does not match resolution " +
                       std::to_string(backbone_.spec().input_resolution));
    Tensor<T> feat = backbone_.forward_features(images, training, freeze_k_);
    for (std::size_t i = 0; i < head_convs_.size(); ++i) {
      feat = head_convs_[i].forward(feat, training);
      feat = head_relus_[i].forward(feat, training);
    }
    const int batch = feat.dim(0);
    const int width = feat.dim(1) * feat.dim(2) * feat.dim(3);
    if (width != flat_width_)
      throw ShapeError("head produced width " + std::to_string(width) + ", expected " +
                       std::to_string(flat_width_));
    head_hw_ = {feat.dim(1), feat.dim(2), feat.dim(3)};
    Tensor<T> flat = Tensor<T>::from_data({batch, width}, std::move(feat.vec()));
    return fc_->forward(flat, training);
  }

  void backward(const Tensor<T>& dlogits) {
    Tensor<T> dflat = fc_->backward(dlogits, true);
    const int batch = dflat.dim(0);
    Tensor<T> d = Tensor<T>::from_data({batch, head_hw_[0], head_hw_[1], head_hw_[2]},
                                       std::move(dflat.vec()));
    for (int i = static_cast<int>(head_convs_.size()) - 1; i >= 0; --i) {
      d = head_relus_[static_cast<std::size_t>(i)].backward(d);
      const bool need_dx = i > 0 || freeze_k_ < 4;
      d = head_convs_[static_cast<std::size_t>(i)].backward(d, need_dx);
    }
    if (freeze_k_ < 4) backbone_.backward_features(d, freeze_k_);
  }

  void freeze_stages(int k) {
    if (k < 0 || k > 4) throw ConfigError("freeze_k must be in [0,4], got " + std::to_string(k));
    freeze_k_ = k;
    for (Param<T>* p : params_) {
      if (p->name.rfind("backbone.stem.", 0) == 0) {
        p->frozen = k >= 1;
      } else if (p->name.rfind("backbone.stage", 0) == 0) {
        const int stage = p->name[14] - '0';
        p->frozen = stage <= k;
      } else {
        p->frozen = false;
      }
    }
    backbone_.apply_freeze(k);
  }
  int freeze_k() const { return freeze_k_; }

  std::vector<Param<T>*>& params() { return params_; }
  Param<T>* find_param(const std::string& name) {
    for (Param<T>* p : params_)
      if (p->name == name) return p;
    return nullptr;
  }
  void zero_grads() {
    for (Param<T>* p : params_) p->zero_grad();
  }

  const BackboneSpec& backbone_spec() const { return backbone_.spec(); }
  const HeadConfig& head_config() const { return head_cfg_; }
  const Normalization& normalization() const { return norm_; }
  int flattened_width() const { return flat_width_; }
  Backbone<T>& backbone() { return backbone_; }

private:
  void init_parameters(std::uint64_t seed) {
    RngStream rng = RngStream(seed).derive("model-init");
    for (Param<T>* p : params_) {
      if (!p->learnable) continue; // running stats keep their construction values
      if (p->shape.size() == 4) {
        // conv weights: He normal, fan-out
        const double fan_out = static_cast<double>(p->shape[0]) * p->shape[2] * p->shape[3];
        const double stddev = std::sqrt(2.0 / fan_out);
        for (T& v : p->value) v = static_cast<T>(rng.normal() * stddev);
      } else if (p->shape.size() == 2) {
        // classifier: small normal keeps initial logits near zero
        for (T& v : p->value) v = static_cast<T>(rng.normal() * 0.01);
      }
      // 1-d parameters (biases, bn gamma/beta) keep construction values
    }
  }

  Backbone<T> backbone_;
  HeadConfig head_cfg_;
  Normalization norm_;
  std::vector<Conv2d<T>> head_convs_;
  std::vector<ReLU<T>> head_relus_;
  std::optional<Linear<T>> fc_;
  std::vector<Param<T>*> params_;
  int flat_width_ = 0;
  int freeze_k_ = 0;
  std::array<int, 3> head_hw_{0, 0, 0};
};

// Stacks normalized HWC float images into an NCHW batch.
template <typename T>
Tensor<T> to_batch(const std::vector<ImageF>& images, const Normalization& norm) {
  if (images.empty()) throw DataError("empty batch");
  const int h = images[0].h, w = images[0].w;
  Tensor<T> out({static_cast<int>(images.size()), 3, h, w});
  for (std::size_t n = 0; n < images.size(); ++n) {
    const ImageF& img = images[n];
    if (img.h != h || img.w != w) throw ShapeError("mixed image sizes in batch");
    for (int c = 0; c < 3; ++c) {
      const float mean = norm.mean[static_cast<std::size_t>(c)];
      const float stdv = norm.std[static_cast<std::size_t>(c)];
      T* dst = &out.at(static_cast<int>(n), c, 0, 0);
      for (int i = 0; i < h * w; ++i)
        dst[i] = static_cast<T>((img.data[static_cast<std::size_t>(i) * 3 + c] - mean) / stdv);
    }
  }
  return out;
}

} // namespace exprkit
