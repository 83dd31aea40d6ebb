// Copyright (c) 2026 quantc authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "quantc/graph.hpp"
#include "quantc/hwspec.hpp"

namespace quantc {

/// Fixed-point decomposition of a scale ratio: ratio ~= multiplier * 2^-shift
/// with multiplier a 32-bit signed integer in [2^30, 2^31).
struct RequantParams {
  int32_t multiplier = 1 << 30;
  int shift = 30;

  double value() const;
};

class RealizeError : public std::runtime_error {
 public:
  explicit RealizeError(const std::string& what) : std::runtime_error(what) {}
};

/// Normalized decomposition of s_in/s_out; relative error <= 2^-30.
RequantParams requantize_params(double s_in, double s_out);

/// Per-edge outcome of the search: the realization input.
struct EdgeDecision {
  int bit = 8;
  double threshold = 1.0;
  int sign = 1;
  int64_t zero_point = 0;
  DType storage_dtype = i8;

  double scale() const;
};

struct Strategy {
  std::map<int, EdgeDecision> edges;  // canonical edge index -> decision
};

/// Narrowest candidate dtype that can hold `bit` effective bits with the
/// required signedness. Throws RealizeError when none is wide enough.
DType choose_storage_dtype(int bit, const std::vector<DType>& candidates, int sign = 1);

/// Clip bounds moved onto the integer grid: round(bound/s_out) + zero_point,
/// intersected with the storage dtype range.
std::pair<int64_t, int64_t> rewrite_clip(double min_f, double max_f, double s_out,
                                         int64_t zero_point, DType storage);

/// Lowers a simulated graph plus a strategy into an integer graph:
/// quantize at float->int boundaries (constant inputs folded), requantize at
/// int->int scale changes, dequantize at int->float boundaries, unified add
/// scales, rewritten clip bounds, and accumulator dtype annotations from the
/// matched hardware signatures. The result contains no simulated_quantize
/// nodes and passes validate_graph.
Graph realize(const Graph& sim_g, const Strategy& strategy, const HardwareSpec& spec);

}  // namespace quantc
