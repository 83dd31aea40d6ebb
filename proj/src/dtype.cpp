// Copyright (c) 2026 quantc authors
// SPDX-License-Identifier: Apache-2.0

#include "quantc/dtype.hpp"

#include <stdexcept>

namespace quantc {

int DType::width() const {
  switch (kind) {
    case DTypeKind::kInt8:
    case DTypeKind::kUInt8:
      return 8;
    case DTypeKind::kInt16:
      return 16;
    case DTypeKind::kInt32:
      return 32;
    case DTypeKind::kFloat32:
      throw std::invalid_argument("float32 has no integer width");
  }
  throw std::invalid_argument("bad dtype kind");
}

int64_t DType::min_value() const {
  if (kind == DTypeKind::kUInt8) return 0;
  return -(int64_t{1} << (width() - 1));
}

int64_t DType::max_value() const {
  if (kind == DTypeKind::kUInt8) return 255;
  return (int64_t{1} << (width() - 1)) - 1;
}

size_t DType::byte_size() const {
  switch (kind) {
    case DTypeKind::kFloat32:
    case DTypeKind::kInt32:
      return 4;
    case DTypeKind::kInt16:
      return 2;
    case DTypeKind::kInt8:
    case DTypeKind::kUInt8:
      return 1;
  }
  throw std::invalid_argument("bad dtype kind");
}

std::string DType::name() const {
  switch (kind) {
    case DTypeKind::kFloat32:
      return "float32";
    case DTypeKind::kInt8:
      return "int8";
    case DTypeKind::kUInt8:
      return "uint8";
    case DTypeKind::kInt16:
      return "int16";
    case DTypeKind::kInt32:
      return "int32";
  }
  throw std::invalid_argument("bad dtype kind");
}

DType parse_dtype(const std::string& token) {
  if (token == "float32") return f32;
  if (token == "int8") return i8;
  if (token == "uint8") return u8;
  if (token == "int16") return i16;
  if (token == "int32") return i32;
  throw std::invalid_argument("unknown dtype token: " + token);
}

int max_bits(DType dtype) {
  if (dtype.is_float()) {
    throw std::invalid_argument("max_bits is undefined for " + dtype.name());
  }
  return dtype.width();
}

}  // namespace quantc
