// Copyright (c) 2026 quantc authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

#include "quantc/dtype.hpp"
#include "quantc/graph.hpp"

namespace quantc {

/// One allowed datatype assignment for an operator: dtypes of its data
/// inputs plus the output (accumulator) dtype.
struct Signature {
  std::vector<DType> in_dtypes;
  DType out_dtype;

  bool operator==(const Signature&) const = default;
  bool all_float() const;
  bool all_integer() const;
};

enum class OpClass { kFloatOnly, kIntegerOnly, kMixed };

/// Declarative backend constraint oracle: per operator, the list of allowed
/// datatype signatures. Operators the spec never mentions are float-only.
class HardwareSpec {
 public:
  HardwareSpec() = default;
  explicit HardwareSpec(std::map<std::string, std::vector<Signature>> table);

  /// Signatures for an operator; unlisted ops yield the float-only default
  /// (one all-f32 signature at the op's data arity).
  std::vector<Signature> signatures(OpKind op) const;
  bool lists(OpKind op) const;

  const std::map<std::string, std::vector<Signature>>& table() const { return table_; }

 private:
  std::map<std::string, std::vector<Signature>> table_;
};

class SpecError : public std::runtime_error {
 public:
  explicit SpecError(const std::string& what) : std::runtime_error(what) {}
};

/// Parses the JSON spec document:
///   {"ops": {"conv2d": [{"in": ["int16","int16"], "out": "int32"}, ...]}}
/// Throws SpecError on unknown op/dtype tokens, arity mismatches and
/// duplicate signatures.
HardwareSpec parse_spec(const std::string& text);
std::string serialize_spec(const HardwareSpec& spec);

OpClass classify_op(const HardwareSpec& spec, OpKind op);

/// Integer-signature dtypes usable at a given data-input port.
std::vector<DType> candidate_dtypes(const HardwareSpec& spec, OpKind op, int port);

/// Narrowest all-integer signature able to hold the given per-port effective
/// bits with compatible signedness (signed codes need signed slots).
/// Returns nullptr when no signature fits.
const Signature* match_signature(const std::vector<Signature>& sigs,
                                 const std::vector<int>& bits,
                                 const std::vector<int>& signs);

}  // namespace quantc
