// Copyright (c) 2026 quantc authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>

namespace quantc {

/// Scalar element types a tensor (or a hardware signature slot) can carry.
enum class DTypeKind : uint8_t {
  kFloat32,
  kInt8,
  kUInt8,
  kInt16,
  kInt32,
};

struct DType {
  DTypeKind kind = DTypeKind::kFloat32;

  constexpr DType() = default;
  constexpr explicit DType(DTypeKind k) : kind(k) {}

  constexpr bool operator==(const DType&) const = default;

  bool is_float() const { return kind == DTypeKind::kFloat32; }
  bool is_integer() const { return !is_float(); }
  bool is_signed() const { return kind != DTypeKind::kUInt8; }

  /// Bit width. Integer kinds only; the sign bit counts toward the width.
  int width() const;

  /// Representable integer range; integer kinds only.
  int64_t min_value() const;
  int64_t max_value() const;

  /// Bytes per element in the sidecar binary format.
  size_t byte_size() const;

  std::string name() const;
};

inline constexpr DType f32{DTypeKind::kFloat32};
inline constexpr DType i8{DTypeKind::kInt8};
inline constexpr DType u8{DTypeKind::kUInt8};
inline constexpr DType i16{DTypeKind::kInt16};
inline constexpr DType i32{DTypeKind::kInt32};

/// Parses a dtype token ("float32", "int8", "uint8", "int16", "int32").
/// Throws std::invalid_argument on anything else.
DType parse_dtype(const std::string& token);

/// Maximum effective bit width an integer dtype can hold (its width).
/// Throws std::invalid_argument for float dtypes.
int max_bits(DType dtype);

}  // namespace quantc
