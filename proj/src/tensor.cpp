// Copyright (c) 2026 quantc authors
// SPDX-License-Identifier: Apache-2.0

#include "quantc/tensor.hpp"

#include <cmath>
#include <cstring>
#include <sstream>
#include <stdexcept>

namespace quantc {

int64_t shape_numel(const std::vector<int64_t>& shape) {
  int64_t n = 1;
  for (int64_t d : shape) {
    if (d < 0) throw std::invalid_argument("negative dimension");
    n *= d;
  }
  return n;
}

std::string shape_to_string(const std::vector<int64_t>& shape) {
  std::ostringstream out;
  out << "(";
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) out << ",";
    out << shape[i];
  }
  out << ")";
  return out.str();
}

Tensor Tensor::zeros(DType dtype, std::vector<int64_t> shape) {
  Tensor t;
  t.dtype_ = dtype;
  int64_t n = shape_numel(shape);
  t.shape_ = std::move(shape);
  if (dtype.is_float()) {
    t.f_.assign(static_cast<size_t>(n), 0.0f);
  } else {
    t.i_.assign(static_cast<size_t>(n), 0);
  }
  return t;
}

Tensor Tensor::from_floats(std::vector<int64_t> shape, std::vector<float> data) {
  if (shape_numel(shape) != static_cast<int64_t>(data.size())) {
    throw std::invalid_argument("data length does not match shape " + shape_to_string(shape));
  }
  Tensor t;
  t.dtype_ = f32;
  t.shape_ = std::move(shape);
  t.f_ = std::move(data);
  return t;
}

Tensor Tensor::from_ints(DType dtype, std::vector<int64_t> shape, std::vector<int32_t> data) {
  if (dtype.is_float()) throw std::invalid_argument("from_ints needs an integer dtype");
  if (shape_numel(shape) != static_cast<int64_t>(data.size())) {
    throw std::invalid_argument("data length does not match shape " + shape_to_string(shape));
  }
  Tensor t;
  t.dtype_ = dtype;
  t.shape_ = std::move(shape);
  t.i_ = std::move(data);
  if (!t.in_range()) {
    throw std::invalid_argument("integer data out of range for " + dtype.name());
  }
  return t;
}

Tensor Tensor::scalar(float value) { return from_floats({1}, {value}); }

int64_t Tensor::numel() const {
  return dtype_.is_float() ? static_cast<int64_t>(f_.size()) : static_cast<int64_t>(i_.size());
}

std::span<const float> Tensor::floats() const {
  if (!dtype_.is_float()) throw std::logic_error("floats() on " + dtype_.name() + " tensor");
  return f_;
}

std::span<float> Tensor::floats() {
  if (!dtype_.is_float()) throw std::logic_error("floats() on " + dtype_.name() + " tensor");
  return f_;
}

std::span<const int32_t> Tensor::ints() const {
  if (dtype_.is_float()) throw std::logic_error("ints() on float32 tensor");
  return i_;
}

std::span<int32_t> Tensor::ints() {
  if (dtype_.is_float()) throw std::logic_error("ints() on float32 tensor");
  return i_;
}

bool Tensor::in_range() const {
  if (dtype_.is_float()) return true;
  int64_t lo = dtype_.min_value();
  int64_t hi = dtype_.max_value();
  for (int32_t v : i_) {
    if (v < lo || v > hi) return false;
  }
  return true;
}

float Tensor::max_abs() const {
  float m = 0.0f;
  if (dtype_.is_float()) {
    for (float v : f_) m = std::max(m, std::fabs(v));
  } else {
    for (int32_t v : i_) m = std::max(m, std::fabs(static_cast<float>(v)));
  }
  return m;
}

bool Tensor::equals(const Tensor& other) const {
  if (dtype_ != other.dtype_ || shape_ != other.shape_) return false;
  if (dtype_.is_float()) {
    return std::memcmp(f_.data(), other.f_.data(), f_.size() * sizeof(float)) == 0;
  }
  return i_ == other.i_;
}

}  // namespace quantc
