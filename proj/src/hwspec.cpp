// Copyright (c) 2026 quantc authors
// SPDX-License-Identifier: Apache-2.0

#include "quantc/hwspec.hpp"

#include <algorithm>

#include <json.hpp>

namespace quantc {

bool Signature::all_float() const {
  if (!out_dtype.is_float()) return false;
  return std::all_of(in_dtypes.begin(), in_dtypes.end(),
                     [](DType d) { return d.is_float(); });
}

bool Signature::all_integer() const {
  if (!out_dtype.is_integer()) return false;
  return std::all_of(in_dtypes.begin(), in_dtypes.end(),
                     [](DType d) { return d.is_integer(); });
}

HardwareSpec::HardwareSpec(std::map<std::string, std::vector<Signature>> table)
    : table_(std::move(table)) {}

bool HardwareSpec::lists(OpKind op) const { return table_.count(op_name(op)) > 0; }

std::vector<Signature> HardwareSpec::signatures(OpKind op) const {
  auto it = table_.find(op_name(op));
  if (it != table_.end()) return it->second;
  // Unlisted operators support float computation only.
  Signature fallback;
  fallback.in_dtypes.assign(static_cast<size_t>(op_info(op).data_arity), f32);
  fallback.out_dtype = f32;
  return {fallback};
}

HardwareSpec parse_spec(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::exception& e) {
    throw SpecError(std::string("spec is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || (!doc.empty() && !doc.contains("ops"))) {
    throw SpecError("spec must be an object with an \"ops\" table");
  }
  std::map<std::string, std::vector<Signature>> table;
  if (doc.contains("ops")) {
    for (const auto& [name, sigs] : doc.at("ops").items()) {
      OpKind op;
      try {
        op = parse_op(name);
      } catch (const GraphError&) {
        throw SpecError("unknown operator in spec: " + name);
      }
      int arity = op_info(op).data_arity;
      std::vector<Signature>& list = table[name];
      for (const Json& sig_doc : sigs) {
        Signature sig;
        for (const Json& token : sig_doc.at("in")) {
          try {
            sig.in_dtypes.push_back(parse_dtype(token.get<std::string>()));
          } catch (const std::invalid_argument& e) {
            throw SpecError(e.what());
          }
        }
        try {
          sig.out_dtype = parse_dtype(sig_doc.at("out").get<std::string>());
        } catch (const std::invalid_argument& e) {
          throw SpecError(e.what());
        }
        if (static_cast<int>(sig.in_dtypes.size()) != arity) {
          throw SpecError("signature for " + name + " has " +
                          std::to_string(sig.in_dtypes.size()) + " input dtypes, operator takes " +
                          std::to_string(arity));
        }
        if (std::find(list.begin(), list.end(), sig) != list.end()) {
          throw SpecError("duplicate signature for " + name);
        }
        list.push_back(sig);
      }
      if (list.empty()) throw SpecError("operator " + name + " listed with no signatures");
    }
  }
  return HardwareSpec(std::move(table));
}

std::string serialize_spec(const HardwareSpec& spec) {
  Json ops = Json::object();
  for (const auto& [name, sigs] : spec.table()) {
    Json list = Json::array();
    for (const Signature& sig : sigs) {
      Json in = Json::array();
      for (DType d : sig.in_dtypes) in.push_back(d.name());
      list.push_back({{"in", in}, {"out", sig.out_dtype.name()}});
    }
    ops[name] = list;
  }
  return Json{{"ops", ops}}.dump(2) + "\n";
}

OpClass classify_op(const HardwareSpec& spec, OpKind op) {
  std::vector<Signature> sigs = spec.signatures(op);
  bool all_float = std::all_of(sigs.begin(), sigs.end(),
                               [](const Signature& s) { return s.all_float(); });
  bool all_integer = std::all_of(sigs.begin(), sigs.end(),
                                 [](const Signature& s) { return s.all_integer(); });
  if (all_float) return OpClass::kFloatOnly;
  if (all_integer) return OpClass::kIntegerOnly;
  return OpClass::kMixed;
}

std::vector<DType> candidate_dtypes(const HardwareSpec& spec, OpKind op, int port) {
  std::vector<DType> result;
  for (const Signature& sig : spec.signatures(op)) {
    if (!sig.all_integer()) continue;
    if (port >= static_cast<int>(sig.in_dtypes.size())) continue;
    DType d = sig.in_dtypes[static_cast<size_t>(port)];
    if (std::find(result.begin(), result.end(), d) == result.end()) result.push_back(d);
  }
  std::sort(result.begin(), result.end(), [](DType a, DType b) {
    return std::pair{a.width(), !a.is_signed()} < std::pair{b.width(), !b.is_signed()};
  });
  return result;
}

const Signature* match_signature(const std::vector<Signature>& sigs,
                                 const std::vector<int>& bits,
                                 const std::vector<int>& signs) {
  const Signature* best = nullptr;
  int best_width = 0;
  int best_acc = 0;
  for (const Signature& sig : sigs) {
    if (!sig.all_integer()) continue;
    if (sig.in_dtypes.size() != bits.size()) continue;
    bool fits = true;
    int total_width = 0;
    for (size_t i = 0; i < bits.size(); ++i) {
      DType d = sig.in_dtypes[i];
      if (max_bits(d) < bits[i]) fits = false;
      if (signs[i] == 1 && !d.is_signed()) fits = false;   // signed codes need a sign bit
      if (signs[i] == 0 && d.is_signed()) fits = false;    // asymmetric codes need unsigned slots
      total_width += d.width();
    }
    if (!fits) continue;
    int acc_width = sig.out_dtype.width();
    if (!best || std::pair{total_width, acc_width} < std::pair{best_width, best_acc}) {
      best = &sig;
      best_width = total_width;
      best_acc = acc_width;
    }
  }
  return best;
}

}  // namespace quantc
