// Copyright (c) 2026 quantc authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "quantc/tensor.hpp"

namespace quantc {

using Json = nlohmann::json;
using NodeId = int64_t;

/// Closed operator set. Extension happens by adding a row to the operator
/// table in graph.cpp, not by callbacks.
enum class OpKind : uint8_t {
  kInput,
  kConstant,
  kConv2d,
  kDense,
  kAdd,
  kRelu,
  kClip,
  kMaxPool2d,
  kGlobalAvgPool2d,
  kFlatten,
  kSimulatedQuantize,
  kQuantize,
  kDequantize,
  kRequantize,
};

OpKind parse_op(const std::string& name);
std::string op_name(OpKind op);

/// Per-operator static facts used by validation, topology and realization.
struct OpInfo {
  int data_arity = 1;       // inputs constrained by hardware signatures
  int max_arity = 1;        // data inputs plus optionals (e.g. bias)
  bool is_mac = false;      // multiply-accumulate (conv2d, dense)
  bool is_arithmetic = false;  // owns an accumulator when quantized
  bool dtype_preserving = false;  // output grid equals input grid (relu, pool, ...)
};

const OpInfo& op_info(OpKind op);

struct Node {
  NodeId id = -1;
  OpKind op = OpKind::kInput;
  Json attrs = Json::object();
  /// Constant payload; engaged iff op == kConstant.
  std::optional<Tensor> payload;

  template <typename T>
  T attr(const std::string& key) const {
    return attrs.at(key).get<T>();
  }
  template <typename T>
  T attr_or(const std::string& key, T fallback) const {
    auto it = attrs.find(key);
    return it == attrs.end() ? fallback : it->get<T>();
  }
  bool has_attr(const std::string& key) const { return attrs.contains(key); }
};

struct PortRef {
  NodeId node = -1;
  int port = 0;
  bool operator==(const PortRef&) const = default;
  auto operator<=>(const PortRef&) const = default;
};

struct Edge {
  PortRef src;  // (producer id, output index)
  PortRef dst;  // (consumer id, input index)
  bool operator==(const Edge&) const = default;
};

/// Directed acyclic dataflow graph. Vertices are operators, edges carry
/// tensors. Immutable once built; transformation passes return new graphs.
class Graph {
 public:
  Graph() = default;
  Graph(std::vector<Node> nodes, std::vector<Edge> edges,
        std::vector<NodeId> inputs, std::vector<PortRef> outputs);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<NodeId>& inputs() const { return inputs_; }
  const std::vector<PortRef>& outputs() const { return outputs_; }

  bool has_node(NodeId id) const;
  const Node& node(NodeId id) const;

  /// Edges feeding a node, indexed by dst port. Missing ports are nullptr.
  std::vector<const Edge*> in_edges(NodeId id) const;
  /// Edges consuming a node's outputs, in stored order.
  std::vector<const Edge*> out_edges(NodeId id) const;

  NodeId max_node_id() const;
  bool contains_op(OpKind op) const;
  /// True if the graph carries realized integer ops (quantize/dequantize/requantize).
  bool is_realized() const;

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<NodeId> inputs_;
  std::vector<PortRef> outputs_;
  std::vector<int64_t> index_of_;  // node id -> position in nodes_, -1 if absent
  NodeId min_id_ = 0;

  void rebuild_index();
};

struct Violation {
  std::string message;
  NodeId node = -1;
};

/// Structural + attribute validation. Violations are report entries, not
/// failures: an empty report means every Graph invariant holds.
std::vector<Violation> validate_graph(const Graph& g);

/// Deterministic topological order: depth-first from graph inputs, then
/// constants, then any remaining sources; a node is emitted once all of its
/// producers are emitted; out-edges are followed in ascending (dst port,
/// dst id) order. Throws GraphError naming a node on a cycle.
std::vector<NodeId> traversal_order(const Graph& g);

/// Canonical edge order: sorted by (position of dst in traversal_order,
/// dst input port). This is the indexing used by stats/strategy vectors.
std::vector<Edge> edge_order(const Graph& g);

class GraphError : public std::runtime_error {
 public:
  explicit GraphError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace quantc
