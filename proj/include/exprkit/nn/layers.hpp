// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "exprkit/nn/gemm.hpp"
#include "exprkit/nn/param.hpp"
#include "exprkit/tensor.hpp"

namespace exprkit {

// Layers keep explicit forward/backward passes with per-layer caches.
// Convolutions run one GEMM per sample, so a sample's activations do not
// depend on what else is in the batch; inference is batch-size invariant
// down to the bit.

template <typename T>
class Conv2d {
public:
  Conv2d(const std::string& name, int in_ch, int out_ch, int kernel, int stride, int pad,
         bool with_bias)
      : in_ch_(in_ch), out_ch_(out_ch), kernel_(kernel), stride_(stride), pad_(pad),
        has_bias_(with_bias) {
    weight.name = name + ".weight";
    weight.resize({out_ch, in_ch, kernel, kernel});
    if (has_bias_) {
      bias.name = name + ".bias";
      bias.resize({out_ch});
    }
  }

  static int out_dim(int in, int kernel, int stride, int pad) {
    const int padded = in + 2 * pad;
    if (padded < kernel) return -1;
    return (padded - kernel) / stride + 1;
  }

  Tensor<T> forward(const Tensor<T>& x, bool cache) {
    if (x.ndim() != 4 || x.dim(1) != in_ch_)
      throw ShapeError("conv " + weight.name + ": input " + x.shape_str());
    const int n = x.dim(0), h = x.dim(2), w = x.dim(3);
    const int oh = out_dim(h, kernel_, stride_, pad_);
    const int ow = out_dim(w, kernel_, stride_, pad_);
    if (oh <= 0 || ow <= 0)
      throw ShapeError("conv " + weight.name + ": spatial " + std::to_string(h) + "x" +
                       std::to_string(w) + " below kernel " + std::to_string(kernel_));

    const int k = in_ch_ * kernel_ * kernel_;
    const int m = oh * ow;
    col_.resize(static_cast<std::size_t>(k) * m);
    Tensor<T> out({n, out_ch_, oh, ow});
    for (int i = 0; i < n; ++i) {
      im2col(x, i, oh, ow, col_.data());
      gemm_nn(weight.value.data(), col_.data(), &out.at(i, 0, 0, 0), out_ch_, k, m);
      if (has_bias_) {
        for (int c = 0; c < out_ch_; ++c) {
          T* row = &out.at(i, c, 0, 0);
          const T b = bias.value[static_cast<std::size_t>(c)];
          for (int j = 0; j < m; ++j) row[j] += b;
        }
      }
    }
    if (cache) {
      x_ = x;
      cached_ = true;
    }
    return out;
  }

  Tensor<T> backward(const Tensor<T>& dy, bool need_dx) {
    if (!cached_) throw ShapeError("conv " + weight.name + ": backward without cached forward");
    const int n = x_.dim(0), h = x_.dim(2), w = x_.dim(3);
    const int oh = dy.dim(2), ow = dy.dim(3);
    const int k = in_ch_ * kernel_ * kernel_;
    const int m = oh * ow;
    col_.resize(static_cast<std::size_t>(k) * m);
    dcol_.resize(static_cast<std::size_t>(k) * m);
    Tensor<T> dx;
    if (need_dx) dx = Tensor<T>({n, in_ch_, h, w});
    const bool want_wgrad = weight.trainable();
    for (int i = 0; i < n; ++i) {
      const T* dyi = &dy.at(i, 0, 0, 0);
      if (want_wgrad) {
        im2col(x_, i, oh, ow, col_.data());
        gemm_nt_acc(dyi, col_.data(), weight.grad.data(), out_ch_, m, k);
        if (has_bias_) {
          for (int c = 0; c < out_ch_; ++c) {
            T s = 0;
            const T* row = dyi + static_cast<std::size_t>(c) * m;
            for (int j = 0; j < m; ++j) s += row[j];
            bias.grad[static_cast<std::size_t>(c)] += s;
          }
        }
      }
      if (need_dx) {
        gemm_tn(weight.value.data(), dyi, dcol_.data(), k, out_ch_, m);
        col2im(dcol_.data(), dx, i, oh, ow);
      }
    }
    return dx;
  }

  void collect(std::vector<Param<T>*>& out) {
    out.push_back(&weight);
    if (has_bias_) out.push_back(&bias);
  }

  void release_cache() {
    x_ = Tensor<T>();
    cached_ = false;
  }

  Param<T> weight;
  Param<T> bias;

private:
  void im2col(const Tensor<T>& x, int n, int oh, int ow, T* col) const {
    const int h = x.dim(2), w = x.dim(3);
    int krow = 0;
    for (int c = 0; c < in_ch_; ++c) {
      for (int ky = 0; ky < kernel_; ++ky) {
        for (int kx = 0; kx < kernel_; ++kx, ++krow) {
          T* dst = col + static_cast<std::size_t>(krow) * oh * ow;
          for (int oy = 0; oy < oh; ++oy) {
            const int sy = oy * stride_ + ky - pad_;
            T* drow = dst + static_cast<std::size_t>(oy) * ow;
            if (sy < 0 || sy >= h) {
              for (int ox = 0; ox < ow; ++ox) drow[ox] = T(0);
              continue;
            }
            const T* srow = &x.at(n, c, sy, 0);
            for (int ox = 0; ox < ow; ++ox) {
              const int sx = ox * stride_ + kx - pad_;
              drow[ox] = (sx >= 0 && sx < w) ? srow[sx] : T(0);
            }
          }
        }
      }
    }
  }

  void col2im(const T* col, Tensor<T>& dx, int n, int oh, int ow) const {
    const int h = dx.dim(2), w = dx.dim(3);
    int krow = 0;
    for (int c = 0; c < in_ch_; ++c) {
      for (int ky = 0; ky < kernel_; ++ky) {
        for (int kx = 0; kx < kernel_; ++kx, ++krow) {
          const T* src = col + static_cast<std::size_t>(krow) * oh * ow;
          for (int oy = 0; oy < oh; ++oy) {
            const int sy = oy * stride_ + ky - pad_;
            if (sy < 0 || sy >= h) continue;
            T* drow = &dx.at(n, c, sy, 0);
            const T* srow = src + static_cast<std::size_t>(oy) * ow;
            for (int ox = 0; ox < ow; ++ox) {
              const int sx = ox * stride_ + kx - pad_;
              if (sx >= 0 && sx < w) drow[sx] += srow[ox];
            }
          }
        }
      }
    }
  }

  int in_ch_, out_ch_, kernel_, stride_, pad_;
  bool has_bias_;
  Tensor<T> x_;
  bool cached_ = false;
  std::vector<T> col_, dcol_;
};

template <typename T>
class BatchNorm2d {
public:
  BatchNorm2d(const std::string& name, int channels, double momentum = 0.1, double eps = 1e-5)
      : channels_(channels), momentum_(momentum), eps_(eps) {
    weight.name = name + ".weight";
    weight.resize({channels});
    std::fill(weight.value.begin(), weight.value.end(), T(1));
    bias.name = name + ".bias";
    bias.resize({channels});
    running_mean.name = name + ".running_mean";
    running_mean.resize({channels});
    running_mean.learnable = false;
    running_var.name = name + ".running_var";
    running_var.resize({channels});
    running_var.learnable = false;
    std::fill(running_var.value.begin(), running_var.value.end(), T(1));
  }

  // stats_frozen forces inference statistics regardless of training mode.
  bool stats_frozen = false;

  Tensor<T> forward(const Tensor<T>& x, bool training, bool cache) {
    if (x.ndim() != 4 || x.dim(1) != channels_)
      throw ShapeError("bn " + weight.name + ": input " + x.shape_str());
    const int n = x.dim(0), h = x.dim(2), w = x.dim(3);
    const std::int64_t count = static_cast<std::int64_t>(n) * h * w;
    const bool use_batch_stats = training && !stats_frozen;

    Tensor<T> out({n, channels_, h, w});
    invstd_.assign(static_cast<std::size_t>(channels_), T(0));
    mean_.assign(static_cast<std::size_t>(channels_), T(0));
    if (use_batch_stats) {
      if (count < 2) throw NumericsError("batch-norm over fewer than 2 values");
      for (int c = 0; c < channels_; ++c) {
        double sum = 0.0, sumsq = 0.0;
        for (int i = 0; i < n; ++i) {
          const T* row = &x.at(i, c, 0, 0);
          for (int j = 0; j < h * w; ++j) {
            const double v = static_cast<double>(row[j]);
            sum += v;
            sumsq += v * v;
          }
        }
        const double mean = sum / static_cast<double>(count);
        const double var = sumsq / static_cast<double>(count) - mean * mean;
        mean_[static_cast<std::size_t>(c)] = static_cast<T>(mean);
        invstd_[static_cast<std::size_t>(c)] = static_cast<T>(1.0 / std::sqrt(var + eps_));
        // torch-style running stats: unbiased variance
        const double unbiased = var * static_cast<double>(count) / static_cast<double>(count - 1);
        running_mean.value[static_cast<std::size_t>(c)] = static_cast<T>(
            (1.0 - momentum_) * static_cast<double>(running_mean.value[static_cast<std::size_t>(c)]) +
            momentum_ * mean);
        running_var.value[static_cast<std::size_t>(c)] = static_cast<T>(
            (1.0 - momentum_) * static_cast<double>(running_var.value[static_cast<std::size_t>(c)]) +
            momentum_ * unbiased);
      }
    } else {
      for (int c = 0; c < channels_; ++c) {
        mean_[static_cast<std::size_t>(c)] = running_mean.value[static_cast<std::size_t>(c)];
        invstd_[static_cast<std::size_t>(c)] = static_cast<T>(
            1.0 / std::sqrt(static_cast<double>(running_var.value[static_cast<std::size_t>(c)]) + eps_));
      }
    }

    if (cache) xhat_ = Tensor<T>({n, channels_, h, w});
    for (int c = 0; c < channels_; ++c) {
      const T mean = mean_[static_cast<std::size_t>(c)];
      const T istd = invstd_[static_cast<std::size_t>(c)];
      const T g = weight.value[static_cast<std::size_t>(c)];
      const T b = bias.value[static_cast<std::size_t>(c)];
      for (int i = 0; i < n; ++i) {
        const T* xr = &x.at(i, c, 0, 0);
        T* yr = &out.at(i, c, 0, 0);
        T* xh = cache ? &xhat_.at(i, c, 0, 0) : nullptr;
        for (int j = 0; j < h * w; ++j) {
          const T xhat = (xr[j] - mean) * istd;
          if (xh) xh[j] = xhat;
          yr[j] = g * xhat + b;
        }
      }
    }
    cached_batch_stats_ = use_batch_stats;
    cached_ = cache;
    return out;
  }

  Tensor<T> backward(const Tensor<T>& dy, bool need_dx) {
    const int n = dy.dim(0), h = dy.dim(2), w = dy.dim(3);
    const double count = static_cast<double>(n) * h * w;
    Tensor<T> dx;
    if (need_dx) dx = Tensor<T>({n, channels_, h, w});

    if (!cached_batch_stats_) {
      // inference statistics: normalization is a fixed affine map
      for (int c = 0; c < channels_; ++c) {
        double s1 = 0.0, s2 = 0.0;
        const T scale = weight.value[static_cast<std::size_t>(c)] * invstd_[static_cast<std::size_t>(c)];
        for (int i = 0; i < n; ++i) {
          const T* dyr = &dy.at(i, c, 0, 0);
          const T* xh = cached_ ? &xhat_.at(i, c, 0, 0) : nullptr;
          T* dxr = need_dx ? &dx.at(i, c, 0, 0) : nullptr;
          for (int j = 0; j < h * w; ++j) {
            s1 += static_cast<double>(dyr[j]);
            if (xh) s2 += static_cast<double>(dyr[j]) * xh[j];
            if (dxr) dxr[j] = dyr[j] * scale;
          }
        }
        if (weight.trainable() && cached_) {
          weight.grad[static_cast<std::size_t>(c)] += static_cast<T>(s2);
          bias.grad[static_cast<std::size_t>(c)] += static_cast<T>(s1);
        }
      }
      return dx;
    }

    if (!cached_) throw ShapeError("bn " + weight.name + ": backward without cached forward");
    for (int c = 0; c < channels_; ++c) {
      double s1 = 0.0, s2 = 0.0; // sum dy, sum dy*xhat
      for (int i = 0; i < n; ++i) {
        const T* dyr = &dy.at(i, c, 0, 0);
        const T* xh = &xhat_.at(i, c, 0, 0);
        for (int j = 0; j < h * w; ++j) {
          s1 += static_cast<double>(dyr[j]);
          s2 += static_cast<double>(dyr[j]) * static_cast<double>(xh[j]);
        }
      }
      if (weight.trainable()) {
        weight.grad[static_cast<std::size_t>(c)] += static_cast<T>(s2);
        bias.grad[static_cast<std::size_t>(c)] += static_cast<T>(s1);
      }
      if (need_dx) {
        const T g = weight.value[static_cast<std::size_t>(c)];
        const T istd = invstd_[static_cast<std::size_t>(c)];
        const T m1 = static_cast<T>(s1 / count);
        const T m2 = static_cast<T>(s2 / count);
        for (int i = 0; i < n; ++i) {
          const T* dyr = &dy.at(i, c, 0, 0);
          const T* xh = &xhat_.at(i, c, 0, 0);
          T* dxr = &dx.at(i, c, 0, 0);
          for (int j = 0; j < h * w; ++j) dxr[j] = g * istd * (dyr[j] - m1 - xh[j] * m2);
        }
      }
    }
    return dx;
  }

  void collect(std::vector<Param<T>*>& out) {
    out.push_back(&weight);
    out.push_back(&bias);
    out.push_back(&running_mean);
    out.push_back(&running_var);
  }

  void release_cache() {
    xhat_ = Tensor<T>();
    cached_ = false;
  }

  Param<T> weight, bias, running_mean, running_var;

private:
  int channels_;
  double momentum_, eps_;
  Tensor<T> xhat_;
  std::vector<T> invstd_, mean_;
  bool cached_ = false;
  bool cached_batch_stats_ = false;
};

template <typename T>
class ReLU {
public:
  Tensor<T> forward(const Tensor<T>& x, bool cache) {
    Tensor<T> out(x.shape());
    const T* xi = x.data();
    T* yo = out.data();
    for (std::int64_t i = 0; i < x.numel(); ++i) yo[i] = xi[i] > T(0) ? xi[i] : T(0);
    if (cache) y_ = out;
    return out;
  }
  Tensor<T> backward(const Tensor<T>& dy) {
    Tensor<T> dx(dy.shape());
    const T* yi = y_.data();
    const T* di = dy.data();
    T* o = dx.data();
    for (std::int64_t i = 0; i < dy.numel(); ++i) o[i] = yi[i] > T(0) ? di[i] : T(0);
    return dx;
  }
  void release_cache() { y_ = Tensor<T>(); }

private:
  Tensor<T> y_;
};

template <typename T>
class MaxPool2d {
public:
  MaxPool2d(int kernel, int stride, int pad) : kernel_(kernel), stride_(stride), pad_(pad) {}

  Tensor<T> forward(const Tensor<T>& x, bool cache) {
    const int n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
    const int oh = Conv2d<T>::out_dim(h, kernel_, stride_, pad_);
    const int ow = Conv2d<T>::out_dim(w, kernel_, stride_, pad_);
    if (oh <= 0 || ow <= 0) throw ShapeError("maxpool: input too small");
    Tensor<T> out({n, c, oh, ow});
    if (cache) {
      argmax_.assign(static_cast<std::size_t>(out.numel()), 0);
      in_shape_ = x.shape();
    }
    std::size_t oi = 0;
    for (int i = 0; i < n; ++i) {
      for (int ch = 0; ch < c; ++ch) {
        const T* plane = &x.at(i, ch, 0, 0);
        for (int oy = 0; oy < oh; ++oy) {
          for (int ox = 0; ox < ow; ++ox, ++oi) {
            T best{};
            int best_idx = -1;
            for (int ky = 0; ky < kernel_; ++ky) {
              const int sy = oy * stride_ + ky - pad_;
              if (sy < 0 || sy >= h) continue;
              for (int kx = 0; kx < kernel_; ++kx) {
                const int sx = ox * stride_ + kx - pad_;
                if (sx < 0 || sx >= w) continue;
                const T v = plane[sy * w + sx];
                if (best_idx < 0 || v > best) {
                  best = v;
                  best_idx = sy * w + sx;
                }
              }
            }
            out[static_cast<std::int64_t>(oi)] = best;
            if (cache) argmax_[oi] = best_idx;
          }
        }
      }
    }
    return out;
  }

  Tensor<T> backward(const Tensor<T>& dy) {
    if (in_shape_.empty()) throw ShapeError("maxpool: backward without cached forward");
    Tensor<T> dx(in_shape_);
    const int n = dy.dim(0), c = dy.dim(1), oh = dy.dim(2), ow = dy.dim(3);
    const int h = in_shape_[2], w = in_shape_[3];
    std::size_t oi = 0;
    for (int i = 0; i < n; ++i)
      for (int ch = 0; ch < c; ++ch) {
        T* plane = &dx.at(i, ch, 0, 0);
        for (int j = 0; j < oh * ow; ++j, ++oi) plane[argmax_[oi]] += dy[static_cast<std::int64_t>(oi)];
        (void)h;
        (void)w;
      }
    return dx;
  }
  void release_cache() {
    argmax_.clear();
    in_shape_.clear();
  }

private:
  int kernel_, stride_, pad_;
  std::vector<int> argmax_;
  std::vector<int> in_shape_;
};

template <typename T>
class Linear {
public:
  Linear(const std::string& name, int in_features, int out_features)
      : in_(in_features), out_(out_features) {
    weight.name = name + ".weight";
    weight.resize({out_features, in_features});
    bias.name = name + ".bias";
    bias.resize({out_features});
  }

  // x: (N, in) flattened rows; one matvec per sample
  Tensor<T> forward(const Tensor<T>& x, bool cache) {
    if (x.ndim() != 2 || x.dim(1) != in_)
      throw ShapeError("linear " + weight.name + ": input " + x.shape_str());
    const int n = x.dim(0);
    Tensor<T> out({n, out_});
    for (int i = 0; i < n; ++i) {
      const T* xi = &x[static_cast<std::int64_t>(i) * in_];
      T* yo = &out[static_cast<std::int64_t>(i) * out_];
      for (int o = 0; o < out_; ++o) {
        const T* wr = &weight.value[static_cast<std::size_t>(o) * in_];
        T acc = bias.value[static_cast<std::size_t>(o)];
        for (int j = 0; j < in_; ++j) acc += wr[j] * xi[j];
        yo[o] = acc;
      }
    }
    if (cache) {
      x_ = x;
      cached_ = true;
    }
    return out;
  }

  Tensor<T> backward(const Tensor<T>& dy, bool need_dx) {
    if (!cached_) throw ShapeError("linear " + weight.name + ": backward without cached forward");
    const int n = dy.dim(0);
    Tensor<T> dx;
    if (need_dx) dx = Tensor<T>({n, in_});
    for (int i = 0; i < n; ++i) {
      const T* dyi = &dy[static_cast<std::int64_t>(i) * out_];
      const T* xi = &x_[static_cast<std::int64_t>(i) * in_];
      if (weight.trainable()) {
        for (int o = 0; o < out_; ++o) {
          T* gw = &weight.grad[static_cast<std::size_t>(o) * in_];
          const T d = dyi[o];
          for (int j = 0; j < in_; ++j) gw[j] += d * xi[j];
          bias.grad[static_cast<std::size_t>(o)] += d;
        }
      }
      if (need_dx) {
        T* dxi = &dx[static_cast<std::int64_t>(i) * in_];
        for (int o = 0; o < out_; ++o) {
          const T* wr = &weight.value[static_cast<std::size_t>(o) * in_];
          const T d = dyi[o];
          for (int j = 0; j < in_; ++j) dxi[j] += wr[j] * d;
        }
      }
    }
    return dx;
  }

  void collect(std::vector<Param<T>*>& out) {
    out.push_back(&weight);
    out.push_back(&bias);
  }
  void release_cache() {
    x_ = Tensor<T>();
    cached_ = false;
  }

  Param<T> weight, bias;

private:
  int in_, out_;
  Tensor<T> x_;
  bool cached_ = false;
};

// (N,C,H,W) -> (N,C) mean over spatial positions.
template <typename T>
class GlobalAvgPool {
public:
  Tensor<T> forward(const Tensor<T>& x, bool cache) {
    const int n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
    Tensor<T> out({n, c});
    for (int i = 0; i < n; ++i)
      for (int ch = 0; ch < c; ++ch) {
        const T* plane = &x.at(i, ch, 0, 0);
        double s = 0.0;
        for (int j = 0; j < h * w; ++j) s += static_cast<double>(plane[j]);
        out[static_cast<std::int64_t>(i) * c + ch] = static_cast<T>(s / (h * w));
      }
    if (cache) in_shape_ = x.shape();
    return out;
  }
  Tensor<T> backward(const Tensor<T>& dy) {
    if (in_shape_.empty()) throw ShapeError("gap: backward without cached forward");
    Tensor<T> dx(in_shape_);
    const int n = in_shape_[0], c = in_shape_[1], h = in_shape_[2], w = in_shape_[3];
    const T inv = T(1) / static_cast<T>(h * w);
    for (int i = 0; i < n; ++i)
      for (int ch = 0; ch < c; ++ch) {
        const T d = dy[static_cast<std::int64_t>(i) * c + ch] * inv;
        T* plane = &dx.at(i, ch, 0, 0);
        for (int j = 0; j < h * w; ++j) plane[j] = d;
      }
    return dx;
  }

private:
  std::vector<int> in_shape_;
};

} // namespace exprkit
