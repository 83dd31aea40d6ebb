// Copyright (c) 2026 quantc authors
// SPDX-License-Identifier: Apache-2.0

#include "quantc/graph.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace quantc {

namespace {

const std::map<std::string, OpKind>& op_table() {
  static const std::map<std::string, OpKind> table = {
      {"input", OpKind::kInput},
      {"constant", OpKind::kConstant},
      {"conv2d", OpKind::kConv2d},
      {"dense", OpKind::kDense},
      {"add", OpKind::kAdd},
      {"relu", OpKind::kRelu},
      {"clip", OpKind::kClip},
      {"max_pool2d", OpKind::kMaxPool2d},
      {"global_avg_pool2d", OpKind::kGlobalAvgPool2d},
      {"flatten", OpKind::kFlatten},
      {"simulated_quantize", OpKind::kSimulatedQuantize},
      {"quantize", OpKind::kQuantize},
      {"dequantize", OpKind::kDequantize},
      {"requantize", OpKind::kRequantize},
  };
  return table;
}

}  // namespace

OpKind parse_op(const std::string& name) {
  auto it = op_table().find(name);
  if (it == op_table().end()) throw GraphError("unknown operator: " + name);
  return it->second;
}

std::string op_name(OpKind op) {
  for (const auto& [name, kind] : op_table()) {
    if (kind == op) return name;
  }
  throw GraphError("bad op kind");
}

const OpInfo& op_info(OpKind op) {
  static const std::unordered_map<OpKind, OpInfo> infos = {
      {OpKind::kInput, {.data_arity = 0, .max_arity = 0}},
      {OpKind::kConstant, {.data_arity = 0, .max_arity = 0}},
      {OpKind::kConv2d, {.data_arity = 2, .max_arity = 3, .is_mac = true, .is_arithmetic = true}},
      {OpKind::kDense, {.data_arity = 2, .max_arity = 3, .is_mac = true, .is_arithmetic = true}},
      {OpKind::kAdd, {.data_arity = 2, .max_arity = 2, .is_arithmetic = true}},
      {OpKind::kRelu, {.data_arity = 1, .max_arity = 1, .dtype_preserving = true}},
      {OpKind::kClip, {.data_arity = 1, .max_arity = 1, .dtype_preserving = true}},
      {OpKind::kMaxPool2d, {.data_arity = 1, .max_arity = 1, .dtype_preserving = true}},
      {OpKind::kGlobalAvgPool2d, {.data_arity = 1, .max_arity = 1}},
      {OpKind::kFlatten, {.data_arity = 1, .max_arity = 1, .dtype_preserving = true}},
      {OpKind::kSimulatedQuantize, {.data_arity = 1, .max_arity = 1}},
      {OpKind::kQuantize, {.data_arity = 1, .max_arity = 1}},
      {OpKind::kDequantize, {.data_arity = 1, .max_arity = 1}},
      {OpKind::kRequantize, {.data_arity = 1, .max_arity = 1}},
  };
  return infos.at(op);
}

Graph::Graph(std::vector<Node> nodes, std::vector<Edge> edges,
             std::vector<NodeId> inputs, std::vector<PortRef> outputs)
    : nodes_(std::move(nodes)),
      edges_(std::move(edges)),
      inputs_(std::move(inputs)),
      outputs_(std::move(outputs)) {
  rebuild_index();
}

void Graph::rebuild_index() {
  index_of_.clear();
  if (nodes_.empty()) return;
  NodeId lo = nodes_.front().id;
  NodeId hi = nodes_.front().id;
  for (const Node& n : nodes_) {
    lo = std::min(lo, n.id);
    hi = std::max(hi, n.id);
  }
  min_id_ = lo;
  index_of_.assign(static_cast<size_t>(hi - lo + 1), -1);
  for (size_t i = 0; i < nodes_.size(); ++i) {
    size_t slot = static_cast<size_t>(nodes_[i].id - lo);
    if (index_of_[slot] >= 0) {
      throw GraphError("duplicate node id " + std::to_string(nodes_[i].id));
    }
    index_of_[slot] = static_cast<int64_t>(i);
  }
}

bool Graph::has_node(NodeId id) const {
  if (id < min_id_) return false;
  size_t slot = static_cast<size_t>(id - min_id_);
  return slot < index_of_.size() && index_of_[slot] >= 0;
}

const Node& Graph::node(NodeId id) const {
  if (!has_node(id)) throw GraphError("no node with id " + std::to_string(id));
  return nodes_[static_cast<size_t>(index_of_[static_cast<size_t>(id - min_id_)])];
}

std::vector<const Edge*> Graph::in_edges(NodeId id) const {
  std::vector<const Edge*> result;
  for (const Edge& e : edges_) {
    if (e.dst.node != id) continue;
    if (e.dst.port >= static_cast<int>(result.size())) {
      result.resize(static_cast<size_t>(e.dst.port) + 1, nullptr);
    }
    if (result[static_cast<size_t>(e.dst.port)] == nullptr) {
      result[static_cast<size_t>(e.dst.port)] = &e;
    }
  }
  return result;
}

std::vector<const Edge*> Graph::out_edges(NodeId id) const {
  std::vector<const Edge*> result;
  for (const Edge& e : edges_) {
    if (e.src.node == id) result.push_back(&e);
  }
  return result;
}

NodeId Graph::max_node_id() const {
  NodeId m = -1;
  for (const Node& n : nodes_) m = std::max(m, n.id);
  return m;
}

bool Graph::contains_op(OpKind op) const {
  return std::any_of(nodes_.begin(), nodes_.end(),
                     [op](const Node& n) { return n.op == op; });
}

bool Graph::is_realized() const {
  return contains_op(OpKind::kQuantize) || contains_op(OpKind::kDequantize) ||
         contains_op(OpKind::kRequantize);
}

namespace {

struct OrderResult {
  std::vector<NodeId> order;
  bool complete = true;
  NodeId cycle_node = -1;
};

// Ready-DFS: roots are graph inputs (in listed order), then constants by
// ascending id, then any other source nodes. A node is emitted when every
// producer has been emitted; out-edges are followed in (dst port, dst id)
// order so equal graphs always yield the same order.
OrderResult compute_order(const Graph& g) {
  OrderResult result;
  std::map<NodeId, std::vector<NodeId>> producers;
  std::map<NodeId, std::vector<std::pair<std::pair<int, NodeId>, NodeId>>> children;
  for (const Node& n : g.nodes()) {
    producers[n.id];
    children[n.id];
  }
  for (const Edge& e : g.edges()) {
    if (!g.has_node(e.src.node) || !g.has_node(e.dst.node)) continue;
    producers[e.dst.node].push_back(e.src.node);
    children[e.src.node].push_back({{e.dst.port, e.dst.node}, e.dst.node});
  }
  for (auto& [id, kids] : children) {
    std::sort(kids.begin(), kids.end());
  }

  std::set<NodeId> emitted;
  std::function<void(NodeId)> visit = [&](NodeId id) {
    if (emitted.count(id)) return;
    for (NodeId p : producers[id]) {
      if (!emitted.count(p)) return;  // not ready; a later producer revisits
    }
    emitted.insert(id);
    result.order.push_back(id);
    for (const auto& [key, child] : children[id]) {
      visit(child);
    }
  };

  std::vector<NodeId> roots;
  for (NodeId id : g.inputs()) roots.push_back(id);
  std::vector<NodeId> consts;
  std::vector<NodeId> other_sources;
  for (const Node& n : g.nodes()) {
    if (n.op == OpKind::kConstant) consts.push_back(n.id);
    else if (producers[n.id].empty() && n.op != OpKind::kInput) other_sources.push_back(n.id);
  }
  std::sort(consts.begin(), consts.end());
  std::sort(other_sources.begin(), other_sources.end());
  roots.insert(roots.end(), consts.begin(), consts.end());
  roots.insert(roots.end(), other_sources.begin(), other_sources.end());
  for (NodeId root : roots) visit(root);

  if (result.order.size() != g.nodes().size()) {
    result.complete = false;
    // Walk producer links inside the unemitted set until a node repeats;
    // that node sits on a cycle.
    NodeId start = -1;
    for (const Node& n : g.nodes()) {
      if (!emitted.count(n.id)) {
        start = n.id;
        break;
      }
    }
    std::set<NodeId> seen;
    NodeId cur = start;
    while (cur >= 0 && !seen.count(cur)) {
      seen.insert(cur);
      NodeId next = -1;
      for (NodeId p : producers[cur]) {
        if (!emitted.count(p)) {
          next = p;
          break;
        }
      }
      if (next < 0) break;  // stuck on a dangling producer, not a cycle
      cur = next;
    }
    result.cycle_node = cur;
  }
  return result;
}

}  // namespace

std::vector<NodeId> traversal_order(const Graph& g) {
  OrderResult r = compute_order(g);
  if (!r.complete) {
    throw GraphError("cycle detected involving node " + std::to_string(r.cycle_node));
  }
  return r.order;
}

std::vector<Edge> edge_order(const Graph& g) {
  std::vector<NodeId> order = traversal_order(g);
  std::map<NodeId, size_t> pos;
  for (size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  std::vector<Edge> edges = g.edges();
  std::stable_sort(edges.begin(), edges.end(), [&](const Edge& a, const Edge& b) {
    return std::pair{pos.at(a.dst.node), a.dst.port} < std::pair{pos.at(b.dst.node), b.dst.port};
  });
  return edges;
}

namespace {

// Shape inference for one node given its input shapes; returns "" on success
// or a violation message. Output shape goes to *out.
std::string infer_shape(const Node& n, const std::vector<const std::vector<int64_t>*>& in,
                        std::vector<int64_t>* out) {
  auto need_rank = [&](size_t idx, size_t rank) {
    return in.size() > idx && in[idx] && in[idx]->size() == rank;
  };
  switch (n.op) {
    case OpKind::kInput: {
      if (!n.has_attr("shape")) return "input node missing shape attr";
      *out = n.attr<std::vector<int64_t>>("shape");
      return "";
    }
    case OpKind::kConstant: {
      if (!n.payload.has_value()) return "constant node missing payload";
      *out = n.payload->shape();
      return "";
    }
    case OpKind::kConv2d: {
      if (!need_rank(0, 4)) return "conv2d data must be NCHW";
      if (!need_rank(1, 4)) return "conv2d weight must be OIHW";
      const auto& d = *in[0];
      const auto& w = *in[1];
      auto strides = n.attr_or<std::vector<int64_t>>("strides", {1, 1});
      auto padding = n.attr_or<std::vector<int64_t>>("padding", {0, 0});
      if (strides.size() != 2 || padding.size() != 2) return "conv2d strides/padding must be 2d";
      if (d[1] != w[1]) return "conv2d channel mismatch";
      if (in.size() > 2 && in[2] && (in[2]->size() != 1 || (*in[2])[0] != w[0])) {
        return "conv2d bias shape mismatch";
      }
      int64_t oh = (d[2] + 2 * padding[0] - w[2]) / strides[0] + 1;
      int64_t ow = (d[3] + 2 * padding[1] - w[3]) / strides[1] + 1;
      if (oh <= 0 || ow <= 0) return "conv2d output would be empty";
      *out = {d[0], w[0], oh, ow};
      return "";
    }
    case OpKind::kDense: {
      if (!need_rank(0, 2)) return "dense data must be (batch, features)";
      if (!need_rank(1, 2)) return "dense weight must be (out, in)";
      const auto& d = *in[0];
      const auto& w = *in[1];
      if (d[1] != w[1]) return "dense reduction mismatch";
      if (in.size() > 2 && in[2] && (in[2]->size() != 1 || (*in[2])[0] != w[0])) {
        return "dense bias shape mismatch";
      }
      *out = {d[0], w[0]};
      return "";
    }
    case OpKind::kAdd: {
      if (in.size() < 2 || !in[0] || !in[1]) return "add needs two inputs";
      if (*in[0] != *in[1]) return "add operand shapes differ";
      *out = *in[0];
      return "";
    }
    case OpKind::kClip: {
      if (!n.has_attr("a_min") && !n.has_attr("q_min")) return "clip missing bounds";
      if (in.empty() || !in[0]) return "clip needs an input";
      *out = *in[0];
      return "";
    }
    case OpKind::kMaxPool2d: {
      if (!need_rank(0, 4)) return "max_pool2d input must be NCHW";
      const auto& d = *in[0];
      auto pool = n.attr<std::vector<int64_t>>("pool_size");
      auto strides = n.attr_or<std::vector<int64_t>>("strides", pool);
      auto padding = n.attr_or<std::vector<int64_t>>("padding", {0, 0});
      if (pool.size() != 2 || strides.size() != 2 || padding.size() != 2) {
        return "max_pool2d attrs must be 2d";
      }
      int64_t oh = (d[2] + 2 * padding[0] - pool[0]) / strides[0] + 1;
      int64_t ow = (d[3] + 2 * padding[1] - pool[1]) / strides[1] + 1;
      if (oh <= 0 || ow <= 0) return "max_pool2d output would be empty";
      *out = {d[0], d[1], oh, ow};
      return "";
    }
    case OpKind::kGlobalAvgPool2d: {
      if (!need_rank(0, 4)) return "global_avg_pool2d input must be NCHW";
      const auto& d = *in[0];
      *out = {d[0], d[1], 1, 1};
      return "";
    }
    case OpKind::kFlatten: {
      if (in.empty() || !in[0] || in[0]->empty()) return "flatten needs a ranked input";
      const auto& d = *in[0];
      int64_t rest = 1;
      for (size_t i = 1; i < d.size(); ++i) rest *= d[i];
      *out = {d[0], rest};
      return "";
    }
    case OpKind::kRelu:
    case OpKind::kSimulatedQuantize:
    case OpKind::kQuantize:
    case OpKind::kDequantize:
    case OpKind::kRequantize: {
      if (in.empty() || !in[0]) return op_name(n.op) + " needs an input";
      *out = *in[0];
      return "";
    }
  }
  return "bad op kind";
}

}  // namespace

std::vector<Violation> validate_graph(const Graph& g) {
  std::vector<Violation> report;
  auto fail = [&](NodeId id, std::string msg) { report.push_back({std::move(msg), id}); };

  std::set<NodeId> ids;
  for (const Node& n : g.nodes()) {
    if (!ids.insert(n.id).second) fail(n.id, "duplicate node id");
  }

  for (const Edge& e : g.edges()) {
    if (!ids.count(e.src.node)) {
      fail(e.src.node, "edge references nonexistent source node " + std::to_string(e.src.node));
    }
    if (!ids.count(e.dst.node)) {
      fail(e.dst.node, "edge references nonexistent destination node " + std::to_string(e.dst.node));
    }
  }

  for (NodeId id : g.inputs()) {
    if (!ids.count(id)) fail(id, "inputs list references nonexistent node");
    else if (g.node(id).op != OpKind::kInput) fail(id, "inputs list references a non-input node");
  }
  for (const PortRef& out : g.outputs()) {
    if (!ids.count(out.node)) fail(out.node, "outputs reference nonexistent node");
    else if (out.port != 0) fail(out.node, "outputs reference a nonexistent port");
  }

  // Port wiring: every input port of a non-source node fed exactly once,
  // contiguously from 0, within the op's arity bounds.
  for (const Node& n : g.nodes()) {
    const OpInfo& info = op_info(n.op);
    std::map<int, int> feeds;
    for (const Edge& e : g.edges()) {
      if (e.dst.node == n.id) feeds[e.dst.port]++;
    }
    int max_port = -1;
    for (const auto& [port, count] : feeds) {
      if (count > 1) fail(n.id, "input port " + std::to_string(port) + " fed by multiple edges");
      max_port = std::max(max_port, port);
    }
    int arity = max_port + 1;
    for (int p = 0; p < arity; ++p) {
      if (!feeds.count(p)) fail(n.id, "input port " + std::to_string(p) + " not fed");
    }
    if (arity < info.data_arity || arity > info.max_arity) {
      fail(n.id, op_name(n.op) + " has " + std::to_string(arity) + " inputs, expected " +
                     std::to_string(info.data_arity) + ".." + std::to_string(info.max_arity));
    }
    if (n.op == OpKind::kConstant) {
      if (!n.payload.has_value()) fail(n.id, "constant node missing payload");
      else if (!n.payload->in_range()) fail(n.id, "constant payload out of dtype range");
    }
  }

  if (!report.empty() && std::any_of(report.begin(), report.end(), [](const Violation& v) {
        return v.message.find("nonexistent") != std::string::npos ||
               v.message.find("duplicate node id") != std::string::npos;
      })) {
    return report;  // structure too broken for order/shape analysis
  }

  OrderResult order = compute_order(g);
  if (!order.complete) {
    fail(order.cycle_node, "cycle detected involving node " + std::to_string(order.cycle_node));
    return report;
  }

  // Reachability: every node reachable from inputs or constants.
  {
    std::set<NodeId> reachable;
    std::vector<NodeId> stack;
    for (NodeId id : g.inputs()) stack.push_back(id);
    for (const Node& n : g.nodes()) {
      if (n.op == OpKind::kConstant) stack.push_back(n.id);
    }
    while (!stack.empty()) {
      NodeId id = stack.back();
      stack.pop_back();
      if (!reachable.insert(id).second) continue;
      for (const Edge* e : g.out_edges(id)) stack.push_back(e->dst.node);
    }
    for (const Node& n : g.nodes()) {
      if (!reachable.count(n.id)) fail(n.id, "node unreachable from inputs or constants");
    }
  }

  // Shape inference in topological order.
  std::map<NodeId, std::vector<int64_t>> shapes;
  for (NodeId id : order.order) {
    const Node& n = g.node(id);
    std::vector<const std::vector<int64_t>*> in_shapes;
    for (const Edge* e : g.in_edges(id)) {
      if (!e) {
        in_shapes.push_back(nullptr);
        continue;
      }
      auto it = shapes.find(e->src.node);
      in_shapes.push_back(it == shapes.end() ? nullptr : &it->second);
    }
    std::vector<int64_t> out;
    std::string err = infer_shape(n, in_shapes, &out);
    if (!err.empty()) {
      fail(id, err);
      continue;
    }
    shapes[id] = std::move(out);
  }

  return report;
}

}  // namespace quantc
