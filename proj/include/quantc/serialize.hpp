// Copyright (c) 2026 quantc authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "quantc/calibration.hpp"
#include "quantc/graph.hpp"
#include "quantc/interpreter.hpp"
#include "quantc/realize.hpp"
#include "quantc/search.hpp"

namespace quantc {

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Graph file: JSON with nodes/edges/inputs/outputs; constant payloads live
/// in a little-endian sidecar referenced as {file, offset, dtype, shape}.
/// float32 elements are written bit-exactly as IEEE-754 binary32.
Graph load_graph(const std::filesystem::path& json_path);
void save_graph(const Graph& g, const std::filesystem::path& json_path);

/// In-memory forms (payload refs resolved against `dir`); used by the
/// loaders and the python bindings.
Json graph_to_json(const Graph& g, const std::string& sidecar_name,
                   std::string* sidecar_bytes);
Graph graph_from_json(const Json& doc, const std::filesystem::path& dir);

/// Dataset manifest: JSON array of {"inputs": [tensor refs], "label": int?}.
Dataset load_dataset(const std::filesystem::path& manifest_path);
void save_dataset(const Dataset& dataset, const std::filesystem::path& manifest_path);

Tensor load_tensor_ref(const Json& ref, const std::filesystem::path& dir);

CalibrationStats load_stats(const std::filesystem::path& path);
void save_stats(const CalibrationStats& stats, const std::filesystem::path& path);

Strategy load_strategy(const std::filesystem::path& path);
void save_strategy(const Strategy& strategy, const Json& meta,
                   const std::filesystem::path& path);

/// Search trace: one JSON record per line, header record first.
void save_trace(const SearchTrace& trace, const std::filesystem::path& path);

/// FNV-1a over a canonical serialization; used to pair stats files with the
/// graph/dataset they were computed from.
uint64_t fingerprint_graph(const Graph& g);
uint64_t fingerprint_dataset(const Dataset& dataset);

uint64_t fnv1a64(const void* data, size_t size, uint64_t seed = 1469598103934665603ull);

}  // namespace quantc
