// Copyright (c) 2026 quantc authors
// SPDX-License-Identifier: Apache-2.0

#include "quantc/topology.hpp"

#include <algorithm>
#include <map>

namespace quantc {

namespace {

bool is_operator_vertex(const Node& n) {
  return n.op != OpKind::kInput && n.op != OpKind::kConstant;
}

}  // namespace

Topology generate_topology(const Graph& g, const HardwareSpec& spec) {
  Topology t;
  std::vector<NodeId> order = traversal_order(g);

  // Operator vertices first; inputs/constants count as non-quantized sources
  // while their consumers are being classified.
  for (NodeId id : order) {
    const Node& n = g.node(id);
    if (!is_operator_vertex(n)) continue;
    OpClass cls = classify_op(spec, n.op);
    if (cls == OpClass::kFloatOnly) {
      t.nqv.insert(id);
      continue;
    }
    if (cls == OpClass::kIntegerOnly) {
      t.qv.insert(id);
      continue;
    }
    // Mixed: quantize unless every source vertex stayed float.
    bool all_sources_nqv = true;
    const OpInfo& info = op_info(n.op);
    auto in_edges = g.in_edges(id);
    for (int p = 0; p < info.data_arity && p < static_cast<int>(in_edges.size()); ++p) {
      if (!in_edges[static_cast<size_t>(p)]) continue;
      NodeId src = in_edges[static_cast<size_t>(p)]->src.node;
      const Node& src_node = g.node(src);
      if (is_operator_vertex(src_node) && t.qv.count(src)) {
        all_sources_nqv = false;
        break;
      }
    }
    (all_sources_nqv ? t.nqv : t.qv).insert(id);
  }

  // Inputs/constants adopt the class of their consumers.
  for (const Node& n : g.nodes()) {
    if (is_operator_vertex(n)) continue;
    auto outs = g.out_edges(n.id);
    bool all_qv = !outs.empty();
    for (const Edge* e : outs) {
      if (!t.qv.count(e->dst.node)) all_qv = false;
    }
    (all_qv ? t.qv : t.nqv).insert(n.id);
  }

  // Constraint check: a quantized vertex must offer usable integer signatures.
  for (NodeId id : t.qv) {
    const Node& n = g.node(id);
    if (!is_operator_vertex(n)) continue;
    const OpInfo& info = op_info(n.op);
    auto sigs = spec.signatures(n.op);
    bool any_integer = std::any_of(sigs.begin(), sigs.end(),
                                   [](const Signature& s) { return s.all_integer(); });
    if (!any_integer) {
      throw TopologyError("vertex " + std::to_string(id) + " (" + op_name(n.op) +
                          ") is quantized but the spec offers no integer signature");
    }
    for (int p = 0; p < info.data_arity; ++p) {
      if (candidate_dtypes(spec, n.op, p).empty()) {
        throw TopologyError("vertex " + std::to_string(id) + " (" + op_name(n.op) +
                            ") has no integer dtype candidate at input " + std::to_string(p));
      }
    }
  }

  // Per-edge candidates and fixed assignments, keyed by canonical index.
  std::vector<Edge> edges = edge_order(g);
  for (size_t k = 0; k < edges.size(); ++k) {
    const Edge& e = edges[k];
    const Node& consumer = g.node(e.dst.node);
    if (!is_operator_vertex(consumer)) continue;
    const OpInfo& info = op_info(consumer.op);
    if (t.qv.count(e.dst.node) && e.dst.port < info.data_arity) {
      t.edge_dtypes[static_cast<int>(k)] = candidate_dtypes(spec, consumer.op, e.dst.port);
    } else if (t.nqv.count(e.dst.node)) {
      t.fixed_edges[static_cast<int>(k)] = f32;
    }
  }
  return t;
}

Graph insert_simulated_quantize(const Graph& g, const Topology& t) {
  std::vector<Node> nodes = g.nodes();
  std::vector<Edge> edges = g.edges();
  std::vector<PortRef> outputs = g.outputs();
  NodeId next_id = g.max_node_id() + 1;

  auto insert_on_edge = [&](const Edge& target, int edge_index, bool boundary) {
    Node sq;
    sq.id = next_id++;
    sq.op = OpKind::kSimulatedQuantize;
    sq.attrs["edge_index"] = edge_index;
    sq.attrs["passthrough"] = true;
    sq.attrs["boundary"] = boundary;
    if (boundary) sq.attrs["out_dtype"] = "float32";
    nodes.push_back(sq);
    for (Edge& e : edges) {
      if (e == target) {
        e = Edge{{sq.id, 0}, target.dst};
        break;
      }
    }
    edges.push_back(Edge{target.src, {sq.id, 0}});
  };

  std::vector<Edge> ordered = edge_order(g);
  for (size_t k = 0; k < ordered.size(); ++k) {
    const Edge& e = ordered[k];
    const Node& consumer = g.node(e.dst.node);
    const Node& producer = g.node(e.src.node);
    bool consumer_op = consumer.op != OpKind::kInput && consumer.op != OpKind::kConstant;
    bool producer_op = producer.op != OpKind::kInput && producer.op != OpKind::kConstant;
    if (consumer_op && t.qv.count(e.dst.node) &&
        e.dst.port < op_info(consumer.op).data_arity) {
      insert_on_edge(e, static_cast<int>(k), false);
    } else if (consumer_op && t.nqv.count(e.dst.node) && producer_op &&
               t.qv.count(e.src.node)) {
      insert_on_edge(e, static_cast<int>(k), true);
    }
  }

  // Graph outputs leaving quantized operators dequantize back to float32.
  for (PortRef& out : outputs) {
    const Node& producer = g.node(out.node);
    bool producer_op = producer.op != OpKind::kInput && producer.op != OpKind::kConstant;
    if (!producer_op || !t.qv.count(out.node)) continue;
    Node sq;
    sq.id = next_id++;
    sq.op = OpKind::kSimulatedQuantize;
    sq.attrs["edge_index"] = -1;
    sq.attrs["passthrough"] = true;
    sq.attrs["boundary"] = true;
    sq.attrs["out_dtype"] = "float32";
    nodes.push_back(sq);
    edges.push_back(Edge{{out.node, out.port}, {sq.id, 0}});
    out = PortRef{sq.id, 0};
  }

  return Graph(std::move(nodes), std::move(edges), g.inputs(), std::move(outputs));
}

Partition partition_segments(const Graph& g, const Topology& t) {
  Partition result;
  std::vector<NodeId> order = traversal_order(g);
  std::map<NodeId, size_t> pos;
  for (size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;

  auto is_qv_op = [&](NodeId id) {
    return t.qv.count(id) && is_operator_vertex(g.node(id));
  };

  // Flood fill over quantized operator vertices; adjacency ignores direction.
  std::map<NodeId, int> segment_of;
  int next_segment = 0;
  for (NodeId id : order) {
    if (!is_qv_op(id) || segment_of.count(id)) continue;
    int seg = next_segment++;
    std::vector<NodeId> stack{id};
    while (!stack.empty()) {
      NodeId cur = stack.back();
      stack.pop_back();
      if (segment_of.count(cur)) continue;
      segment_of[cur] = seg;
      for (const Edge& e : g.edges()) {
        if (e.src.node == cur && is_qv_op(e.dst.node) && !segment_of.count(e.dst.node)) {
          stack.push_back(e.dst.node);
        }
        if (e.dst.node == cur && is_qv_op(e.src.node) && !segment_of.count(e.src.node)) {
          stack.push_back(e.src.node);
        }
      }
    }
  }

  result.segments.resize(static_cast<size_t>(next_segment));
  for (NodeId id : order) {
    auto it = segment_of.find(id);
    if (it != segment_of.end()) {
      result.segments[static_cast<size_t>(it->second)].vertices.push_back(id);
    } else {
      result.remainder.push_back(id);
    }
  }

  for (const Edge& e : edge_order(g)) {
    bool src_in = segment_of.count(e.src.node) > 0;
    bool dst_in = segment_of.count(e.dst.node) > 0;
    if (src_in && dst_in && segment_of[e.src.node] == segment_of[e.dst.node]) {
      result.segments[static_cast<size_t>(segment_of[e.src.node])].interior_edges.push_back(e);
    } else if (src_in || dst_in) {
      int seg = src_in ? segment_of[e.src.node] : segment_of[e.dst.node];
      result.segments[static_cast<size_t>(seg)].boundary_edges.push_back(e);
    } else {
      result.remainder_edges.push_back(e);
    }
  }
  return result;
}

std::vector<int> searchable_edge_indices(const Topology& t) {
  std::vector<int> result;
  for (const auto& [k, cands] : t.edge_dtypes) result.push_back(k);
  return result;
}

std::vector<int> simulated_edge_indices(const Graph& g, const Topology& t) {
  std::vector<int> result;
  std::vector<Edge> ordered = edge_order(g);
  for (size_t k = 0; k < ordered.size(); ++k) {
    const Edge& e = ordered[k];
    const Node& consumer = g.node(e.dst.node);
    const Node& producer = g.node(e.src.node);
    bool consumer_op = is_operator_vertex(consumer);
    bool producer_op = is_operator_vertex(producer);
    if (consumer_op && t.qv.count(e.dst.node) && e.dst.port < op_info(consumer.op).data_arity) {
      result.push_back(static_cast<int>(k));
    } else if (consumer_op && t.nqv.count(e.dst.node) && producer_op && t.qv.count(e.src.node)) {
      result.push_back(static_cast<int>(k));
    }
  }
  return result;
}

std::string dump_topology(const Graph& g, const Topology& t) {
  Json vertices = Json::object();
  for (const Node& n : g.nodes()) {
    vertices[std::to_string(n.id)] = t.qv.count(n.id) ? "quantized" : "float";
  }
  Json edges = Json::object();
  std::vector<Edge> ordered = edge_order(g);
  for (size_t k = 0; k < ordered.size(); ++k) {
    Json entry = {{"src", {ordered[k].src.node, ordered[k].src.port}},
                  {"dst", {ordered[k].dst.node, ordered[k].dst.port}}};
    auto cand = t.edge_dtypes.find(static_cast<int>(k));
    if (cand != t.edge_dtypes.end()) {
      Json list = Json::array();
      for (DType d : cand->second) list.push_back(d.name());
      entry["candidates"] = list;
    }
    auto fixed = t.fixed_edges.find(static_cast<int>(k));
    if (fixed != t.fixed_edges.end()) entry["fixed"] = fixed->second.name();
    edges[std::to_string(k)] = entry;
  }
  return Json{{"vertices", vertices}, {"edges", edges}}.dump(2) + "\n";
}

}  // namespace quantc
