// Copyright (c) 2026 quantc authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>

#include "quantc/graph.hpp"
#include "quantc/hwspec.hpp"
#include "quantc/interpreter.hpp"

namespace quantc {
namespace fixtures {

struct ModelFixture {
  Graph graph;
  Dataset calibration;
  Dataset evaluation;
};

/// Desk-scale CNN: three 3x3 conv2d (+relu) over 8x8x3 inputs, global average
/// pooling, flatten and a 10-class dense head. Weights are seeded; the dense
/// head is set to class centroids of the pooled features so fp32 predictions
/// carry a verified margin. 64 calibration and 256 evaluation samples.
ModelFixture make_small_cnn(uint64_t seed = 7);

/// Single dense layer with a 512-wide reduction whose value distributions are
/// tuned (and verified at generation time) so that 8 effective bits overflow
/// int16 accumulation on the calibration data while 6 effective bits stay
/// clear with margin, and so that the loss strictly improves along
/// single-edge bit decrements until the first overflow-free point.
ModelFixture make_overflow_probe(uint64_t seed = 11);

/// Named hardware specs:
///   fig3          - add {f32,i32}, conv2d {i16x16->i32, i8x8->i16}, f32 pooling
///   x86_vnni_like - u8 x i8 -> i32 mac ops
///   arm_vmlal_like- i8 x i8 -> i16 and i16 x i16 -> i32 mac ops
///   int8_int32    - i8 x i8 -> i32 mac ops, i8 elementwise
HardwareSpec spec_fixture(const std::string& name);

/// Dense/relu chain with exactly `searchable_edges` quantizable edges under
/// the int8_int32 spec; used for search-space arithmetic checks.
Graph make_deep_chain(int searchable_edges, uint64_t seed = 3);

/// Fig-style three-op chain: conv2d -> add(constant) -> global_avg_pool2d,
/// with a small seeded dataset.
ModelFixture make_conv_add_pool_chain(uint64_t seed = 5);

class FixtureError : public std::runtime_error {
 public:
  explicit FixtureError(const std::string& what) : std::runtime_error(what) {}
};

/// Writes every committed fixture (graphs, datasets, specs) under dir.
void write_all(const std::string& dir);

/// Regenerates into a scratch dir and byte-compares against dir; throws
/// FixtureError on any mismatch.
void verify_committed(const std::string& dir);

}  // namespace fixtures
}  // namespace quantc
