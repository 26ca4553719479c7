// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "exprkit/error.hpp"

namespace exprkit {

// Dense contiguous tensor, NCHW layout for 4-d activations.
template <typename T>
class Tensor {
public:
  Tensor() = default;
  explicit Tensor(std::vector<int> shape) : shape_(std::move(shape)) {
    data_.assign(numel_of(shape_), T(0));
  }
  static Tensor zeros_like(const Tensor& other) { return Tensor(other.shape_); }
  static Tensor from_data(std::vector<int> shape, std::vector<T>&& data) {
    Tensor t;
    if (numel_of(shape) != static_cast<std::int64_t>(data.size()))
      throw ShapeError("from_data: shape does not match buffer size");
    t.shape_ = std::move(shape);
    t.data_ = std::move(data);
    return t;
  }

  const std::vector<int>& shape() const { return shape_; }
  int dim(int i) const { return shape_.at(static_cast<std::size_t>(i)); }
  int ndim() const { return static_cast<int>(shape_.size()); }
  std::int64_t numel() const { return static_cast<std::int64_t>(data_.size()); }
  bool empty() const { return data_.empty(); }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  std::vector<T>& vec() { return data_; }
  const std::vector<T>& vec() const { return data_; }

  T& operator[](std::int64_t i) { return data_[static_cast<std::size_t>(i)]; }
  const T& operator[](std::int64_t i) const { return data_[static_cast<std::size_t>(i)]; }

  // 4-d accessors (n, c, h, w)
  T& at(int n, int c, int h, int w) { return data_[idx4(n, c, h, w)]; }
  const T& at(int n, int c, int h, int w) const { return data_[idx4(n, c, h, w)]; }
  std::size_t idx4(int n, int c, int h, int w) const {
    return ((static_cast<std::size_t>(n) * shape_[1] + c) * shape_[2] + h) * shape_[3] + w;
  }

  void fill(T v) { std::fill(data_.begin(), data_.end(), v); }

  static std::int64_t numel_of(const std::vector<int>& shape) {
    std::int64_t n = 1;
    for (int d : shape) {
      if (d < 0) throw ShapeError("negative dimension");
      n *= d;
    }
    return n;
  }

  std::string shape_str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < shape_.size(); ++i) {
      if (i) s += "x";
      s += std::to_string(shape_[i]);
    }
    return s + ")";
  }

private:
  std::vector<int> shape_;
  std::vector<T> data_;
};

} // namespace exprkit
