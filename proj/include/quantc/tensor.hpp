// Copyright (c) 2026 quantc authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "quantc/dtype.hpp"

namespace quantc {

/// Dense row-major tensor. Float data is IEEE-754 binary32; integer data is
/// held as int32 (every supported integer dtype fits) and range-checked
/// against the declared dtype.
class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(DType dtype, std::vector<int64_t> shape);
  static Tensor from_floats(std::vector<int64_t> shape, std::vector<float> data);
  static Tensor from_ints(DType dtype, std::vector<int64_t> shape, std::vector<int32_t> data);
  static Tensor scalar(float value);

  DType dtype() const { return dtype_; }
  const std::vector<int64_t>& shape() const { return shape_; }
  int64_t numel() const;

  std::span<const float> floats() const;
  std::span<float> floats();
  std::span<const int32_t> ints() const;
  std::span<int32_t> ints();

  /// True if every integer element lies inside the dtype's range (floats: always).
  bool in_range() const;

  float max_abs() const;

  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

  /// Exact elementwise equality (bitwise for floats).
  bool equals(const Tensor& other) const;

 private:
  DType dtype_{};
  std::vector<int64_t> shape_;
  std::vector<float> f_;
  std::vector<int32_t> i_;
};

int64_t shape_numel(const std::vector<int64_t>& shape);
std::string shape_to_string(const std::vector<int64_t>& shape);

}  // namespace quantc
