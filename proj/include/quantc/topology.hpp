// Copyright (c) 2026 quantc authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <set>
#include <vector>

#include "quantc/graph.hpp"
#include "quantc/hwspec.hpp"

namespace quantc {

/// Per-vertex quantized/non-quantized partition plus per-edge datatype
/// candidates, derived from the hardware spec.
struct Topology {
  std::set<NodeId> qv;   // quantized vertices (operators, inputs and constants)
  std::set<NodeId> nqv;  // non-quantized vertices
  /// Edge (by canonical index) -> integer dtypes the consumer admits there.
  std::map<int, std::vector<DType>> edge_dtypes;
  /// Edges forced to a fixed dtype (float32 at non-quantized consumer
  /// boundaries and at graph outputs of quantized producers).
  std::map<int, DType> fixed_edges;

  bool is_quantized(NodeId id) const { return qv.count(id) > 0; }
};

class TopologyError : public std::runtime_error {
 public:
  explicit TopologyError(const std::string& what) : std::runtime_error(what) {}
};

/// Vertex partition pass: float-only ops are never quantized, integer-only
/// ops always are, and mixed ops are quantized unless every source vertex
/// stayed float. Inputs and constants adopt the class of their consumers
/// (quantized iff every consumer is). Throws TopologyError when a quantized
/// vertex has no usable all-integer signature.
Topology generate_topology(const Graph& g, const HardwareSpec& spec);

/// Inserts a simulated_quantize node on every edge whose consumer is
/// quantized (data ports only) and a float32-out boundary one on edges from
/// quantized producers into non-quantized consumers or graph outputs.
/// Inserted nodes start in passthrough mode and carry the canonical index of
/// the original edge in attr "edge_index" (-1 for graph-output boundaries).
Graph insert_simulated_quantize(const Graph& g, const Topology& t);

/// One maximal connected group of quantized operator vertices.
struct Segment {
  std::vector<NodeId> vertices;      // operator vertices only
  std::vector<Edge> interior_edges;  // both endpoints inside
  std::vector<Edge> boundary_edges;  // exactly one endpoint inside
};

struct Partition {
  std::vector<Segment> segments;
  std::vector<NodeId> remainder;       // non-quantized operator vertices, inputs, constants
  std::vector<Edge> remainder_edges;   // edges touching no segment
};

Partition partition_segments(const Graph& g, const Topology& t);

/// Canonical indices of edges that receive searchable simulated_quantize
/// nodes (the edge_dtypes keys, in order).
std::vector<int> searchable_edge_indices(const Topology& t);

/// Canonical indices of every edge that receives a simulated_quantize node,
/// searchable or float32 boundary; these are the edges calibration covers.
std::vector<int> simulated_edge_indices(const Graph& g, const Topology& t);

/// Debug dump: vertex classes and per-edge candidates, JSON text.
std::string dump_topology(const Graph& g, const Topology& t);

}  // namespace quantc
