// Copyright (c) 2026 quantc authors
// SPDX-License-Identifier: Apache-2.0

#include "quantc/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace quantc {

double compute_scale(double threshold, int bit, int sign) {
  if (!(threshold > 0.0)) throw std::invalid_argument("threshold must be positive");
  if (bit < 2) throw std::invalid_argument("bit must be >= 2");
  if (sign != 0 && sign != 1) throw std::invalid_argument("sign must be 0 or 1");
  return threshold / std::exp2(static_cast<double>(bit - sign));
}

QuantBounds quant_bounds(int bit, int sign) {
  if (bit < 2) throw std::invalid_argument("bit must be >= 2");
  if (sign == 1) {
    return {-(int64_t{1} << (bit - 1)), (int64_t{1} << (bit - 1)) - 1};
  }
  return {0, (int64_t{1} << bit) - 1};
}

QParams QParams::symmetric(double threshold, int bit, DType storage) {
  QParams p;
  p.threshold = threshold;
  p.bit = bit;
  p.sign = 1;
  p.in_dtype = storage;
  p.out_dtype = storage;
  return p;
}

QParams noop_params() {
  QParams p;
  p.passthrough = true;
  p.in_dtype = f32;
  p.out_dtype = f32;
  return p;
}

namespace {

void check_params(const QParams& p) {
  if (p.passthrough) return;
  if (!(p.threshold > 0.0)) throw std::invalid_argument("QParams: threshold must be positive");
  if (p.bit < 2) throw std::invalid_argument("QParams: bit must be >= 2");
  if (p.in_dtype.is_integer()) {
    if (p.bit > max_bits(p.in_dtype)) {
      throw std::invalid_argument("QParams: bit exceeds storage dtype width");
    }
    int expected_sign = p.in_dtype.is_signed() ? 1 : 0;
    if (p.sign != expected_sign) {
      throw std::invalid_argument("QParams: sign incompatible with storage dtype");
    }
  }
}

}  // namespace

float simulated_quantize_value(float x, const QParams& p) {
  double v = static_cast<double>(x);
  if (p.acc_dtype.has_value() && p.acc_scale > 0.0) {
    // Producer accumulator saturation happens before requantization.
    double lo = static_cast<double>(p.acc_dtype->min_value()) * p.acc_scale;
    double hi = static_cast<double>(p.acc_dtype->max_value()) * p.acc_scale;
    v = std::clamp(v, lo, hi);
  }
  if (p.passthrough) return static_cast<float>(v);
  double s = compute_scale(p.threshold, p.bit, p.sign);
  QuantBounds b = quant_bounds(p.bit, p.sign);
  double q = std::round(v / s) + static_cast<double>(p.zero_point);
  q = std::clamp(q, static_cast<double>(b.qmin), static_cast<double>(b.qmax));
  return static_cast<float>((q - static_cast<double>(p.zero_point)) * s);
}

Tensor simulated_quantize(const Tensor& x, const QParams& p) {
  if (x.dtype() != f32) throw std::invalid_argument("simulated_quantize needs a float32 tensor");
  check_params(p);
  if (p.passthrough && !p.acc_dtype.has_value()) return x;
  Tensor out = x;
  for (float& v : out.floats()) v = simulated_quantize_value(v, p);
  return out;
}

int64_t asymmetric_zero_point(double min_value, double range_threshold, int bit) {
  double s = compute_scale(range_threshold, bit, 0);
  int64_t zp = static_cast<int64_t>(std::llround(-min_value / s));
  return std::clamp<int64_t>(zp, 0, (int64_t{1} << bit) - 1);
}

}  // namespace quantc
