// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "exprkit/dataset/loader.hpp"
#include "exprkit/model/backbone.hpp"
#include "exprkit/model/weights.hpp"
#include "exprkit/train/config.hpp"
#include "exprkit/train/trainer.hpp"

namespace exprkit {

// Role of the locally warped view in the InfoNCE objective. A warp moves
// pixels the way muscle motion would, so by default it repels the anchor
// (negative); the opposite polarity is kept for ablation.
enum class WarpPolarity { negative, positive };

WarpPolarity parse_polarity(const std::string& s);

template <typename T>
struct InfoNceResult {
  double loss = 0.0;
  Tensor<T> dembed; // gradient w.r.t. the normalized embeddings
};

// InfoNCE over a batch of view triples. `embed` rows are L2-normalized and
// ordered [anchors(B) | global views(B) | warped views(B)]. For anchor i the
// positive is its global view (or its warped view under positive polarity);
// the candidates are the positive, every view of the opposite role, and the
// other images' anchor and positive-role views: K = 3B - 1 per anchor.
template <typename T>
InfoNceResult<T> infonce_with_grad(const Tensor<T>& embed, double tau, WarpPolarity polarity) {
  if (tau <= 0) throw ConfigError("temperature must be > 0");
  if (embed.ndim() != 2 || embed.dim(0) % 3 != 0)
    throw ShapeError("infonce: expected (3B, D) embeddings, got " + embed.shape_str());
  const int batch = embed.dim(0) / 3;
  if (batch < 2) throw ConfigError("contrastive batch must hold >= 2 images");
  const int dim = embed.dim(1);

  const int pos_base = polarity == WarpPolarity::negative ? batch : 2 * batch;
  const int neg_base = polarity == WarpPolarity::negative ? 2 * batch : batch;

  auto dot = [&](int a, int b) {
    const T* ra = &embed[static_cast<std::int64_t>(a) * dim];
    const T* rb = &embed[static_cast<std::int64_t>(b) * dim];
    double s = 0.0;
    for (int j = 0; j < dim; ++j) s += static_cast<double>(ra[j]) * rb[j];
    return s;
  };

  InfoNceResult<T> result;
  result.dembed = Tensor<T>(embed.shape());
  std::vector<int> candidates;
  std::vector<double> logits, probs;
  for (int i = 0; i < batch; ++i) {
    candidates.clear();
    candidates.push_back(pos_base + i); // index 0 = positive
    for (int j = 0; j < batch; ++j) candidates.push_back(neg_base + j);
    for (int j = 0; j < batch; ++j)
      if (j != i) {
        candidates.push_back(j);
        candidates.push_back(pos_base + j);
      }

    logits.assign(candidates.size(), 0.0);
    double maxv = -1e300;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      logits[c] = dot(i, candidates[c]) / tau;
      maxv = std::max(maxv, logits[c]);
    }
    double denom = 0.0;
    for (const double l : logits) denom += std::exp(l - maxv);
    const double log_denom = maxv + std::log(denom);
    result.loss += log_denom - logits[0];

    probs.assign(candidates.size(), 0.0);
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      const double p = std::exp(logits[c] - log_denom);
      const double coef = (p - (c == 0 ? 1.0 : 0.0)) / (tau * batch);
      const T* u_c = &embed[static_cast<std::int64_t>(candidates[c]) * dim];
      const T* u_i = &embed[static_cast<std::int64_t>(i) * dim];
      T* d_i = &result.dembed[static_cast<std::int64_t>(i) * dim];
      T* d_c = &result.dembed[static_cast<std::int64_t>(candidates[c]) * dim];
      for (int j = 0; j < dim; ++j) {
        d_i[j] += static_cast<T>(coef * u_c[j]);
        d_c[j] += static_cast<T>(coef * u_i[j]);
      }
    }
  }
  result.loss /= batch;
  return result;
}

// Backbone + global average pooling + 2-layer projection MLP, trained with
// the contrastive objective and exported without the projector.
template <typename T>
class ContrastiveEncoder {
public:
  ContrastiveEncoder(const BackboneSpec& spec, int proj_dim, std::uint64_t init_seed)
      : backbone_(spec) {
    fc1_.emplace("proj.fc1", spec.feature_channels(), proj_dim);
    fc2_.emplace("proj.fc2", proj_dim, proj_dim);
    backbone_.collect(params_);
    fc1_->collect(params_);
    fc2_->collect(params_);
    init_parameters(init_seed);
  }
  ContrastiveEncoder(const ContrastiveEncoder&) = delete;
  ContrastiveEncoder& operator=(const ContrastiveEncoder&) = delete;

  // images: (N,3,h,w), any spatial size the backbone accepts.
  Tensor<T> embed(const Tensor<T>& images, bool training) {
    Tensor<T> f = backbone_.forward_features(images, training, /*freeze_k=*/0);
    f = gap_.forward(f, training);
    f = fc1_->forward(f, training);
    f = relu_.forward(f, training);
    Tensor<T> e = fc2_->forward(f, training);
    // row-wise L2 normalization
    const int n = e.dim(0), d = e.dim(1);
    Tensor<T> u({n, d});
    inv_norm_.assign(static_cast<std::size_t>(n), T(0));
    for (int i = 0; i < n; ++i) {
      const T* er = &e[static_cast<std::int64_t>(i) * d];
      double ss = 0.0;
      for (int j = 0; j < d; ++j) ss += static_cast<double>(er[j]) * er[j];
      const T inv = static_cast<T>(1.0 / std::sqrt(ss + 1e-12));
      inv_norm_[static_cast<std::size_t>(i)] = inv;
      T* ur = &u[static_cast<std::int64_t>(i) * d];
      for (int j = 0; j < d; ++j) ur[j] = er[j] * inv;
    }
    if (training) u_cache_ = u;
    return u;
  }

  void backward(const Tensor<T>& dembed) {
    //   de = (du - u (u . du)) * inv_norm
    const int n = dembed.dim(0), d = dembed.dim(1);
    Tensor<T> de({n, d});
    for (int i = 0; i < n; ++i) {
      const T* du = &dembed[static_cast<std::int64_t>(i) * d];
      const T* u = &u_cache_[static_cast<std::int64_t>(i) * d];
      double dot = 0.0;
      for (int j = 0; j < d; ++j) dot += static_cast<double>(u[j]) * du[j];
      T* o = &de[static_cast<std::int64_t>(i) * d];
      const T inv = inv_norm_[static_cast<std::size_t>(i)];
      for (int j = 0; j < d; ++j) o[j] = (du[j] - u[j] * static_cast<T>(dot)) * inv;
    }
    Tensor<T> g = fc2_->backward(de, true);
    g = relu_.backward(g);
    g = fc1_->backward(g, true);
    g = gap_.backward(g);
    backbone_.backward_features(g, /*freeze_k=*/0);
  }

  std::vector<Param<T>*>& params() { return params_; }
  void zero_grads() {
    for (Param<T>* p : params_) p->zero_grad();
  }
  Backbone<T>& backbone() { return backbone_; }

  // Backbone arrays only; the projection head never leaves the pretext task.
  NamedArrays export_backbone() {
    NamedArrays out;
    for (const Param<T>* p : params_) {
      if (p->name.rfind("backbone.", 0) != 0) continue;
      ArrayF32 a;
      a.shape = p->shape;
      a.data.reserve(p->value.size());
      for (const T v : p->value) a.data.push_back(static_cast<float>(v));
      out.emplace(p->name, std::move(a));
    }
    return out;
  }

private:
  void init_parameters(std::uint64_t seed) {
    RngStream rng = RngStream(seed).derive("encoder-init");
    for (Param<T>* p : params_) {
      if (!p->learnable) continue;
      if (p->shape.size() == 4) {
        const double fan_out = static_cast<double>(p->shape[0]) * p->shape[2] * p->shape[3];
        const double stddev = std::sqrt(2.0 / fan_out);
        for (T& v : p->value) v = static_cast<T>(rng.normal() * stddev);
      } else if (p->shape.size() == 2) {
        const double stddev = std::sqrt(1.0 / p->shape[1]);
        for (T& v : p->value) v = static_cast<T>(rng.normal() * stddev);
      }
    }
  }

  Backbone<T> backbone_;
  GlobalAvgPool<T> gap_;
  std::optional<Linear<T>> fc1_, fc2_;
  ReLU<T> relu_;
  std::vector<Param<T>*> params_;
  Tensor<T> u_cache_;
  std::vector<T> inv_norm_;
};

struct PretrainOutput {
  std::filesystem::path checkpoint;
  std::filesystem::path log_path;
  std::vector<TrainLogRecord> records;
  double final_loss = 0.0;
};

// Warping-based contrastive pretraining over the unlabeled frames of a
// split; emits a backbone-only checkpoint flagged pretext="contrastive-warp".
PretrainOutput pretrain_run(const FrameDataset& data, const RunConfig& config,
                            const std::filesystem::path& out_dir);

} // namespace exprkit
