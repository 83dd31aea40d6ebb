// Copyright (c) 2026 quantc authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>

#include "quantc/tensor.hpp"

namespace quantc {

/// Scale between real and quant value: threshold / 2^(bit - sign).
double compute_scale(double threshold, int bit, int sign);

struct QuantBounds {
  int64_t qmin;
  int64_t qmax;
};

/// Integer code range of an effective bit width: sign=1 is the symmetric
/// signed grid, sign=0 the unsigned grid.
QuantBounds quant_bounds(int bit, int sign);

/// Parameters of one simulated_quantize application.
///
/// in_dtype is the storage dtype whose grid the value is quantized into
/// (bit <= max_bits(in_dtype), sign matches its signedness). out_dtype is
/// what the consumer sees: equal to in_dtype for interior quantized edges,
/// float32 at dequantize boundaries. When the producing operator accumulates
/// (conv2d/dense/add), acc_dtype/acc_scale describe its accumulator and the
/// kernel saturates to that range before requantizing.
struct QParams {
  double threshold = 0.0;
  int bit = 8;
  int sign = 1;
  DType in_dtype = i8;
  DType out_dtype = i8;
  int64_t zero_point = 0;
  bool passthrough = false;
  std::optional<DType> acc_dtype;
  double acc_scale = 0.0;

  static QParams symmetric(double threshold, int bit, DType storage);
};

/// Parameters under which simulated_quantize is the identity map.
QParams noop_params();

/// fp32 emulation of quantize->dequantize plus accumulator saturation:
/// rounding error (round), saturated error (clamp to the bit grid) and
/// overflow error (clamp to the accumulator range) on float32 tensors.
/// Rounding is half-away-from-zero everywhere.
Tensor simulated_quantize(const Tensor& x, const QParams& p);

/// Scalar kernel used by the tensor version; exposed for tests.
float simulated_quantize_value(float x, const QParams& p);

/// Zero point for asymmetric mode: clamp(round(-min/s), 0, 2^bit - 1)
/// with s = range_threshold / 2^bit.
int64_t asymmetric_zero_point(double min_value, double range_threshold, int bit);

}  // namespace quantc
