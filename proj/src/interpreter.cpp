// Copyright (c) 2026 quantc authors
// SPDX-License-Identifier: Apache-2.0

#include "quantc/interpreter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "quantc/parallel.hpp"

namespace quantc {

OverflowError::OverflowError(NodeId node_, int64_t flat_index_, int64_t value_)
    : EvalError("accumulator overflow at node " + std::to_string(node_) + ", element " +
                std::to_string(flat_index_) + " (value " + std::to_string(value_) + ")"),
      node(node_),
      flat_index(flat_index_),
      value(value_) {}

namespace {

int64_t clamp_or_trap(int64_t v, DType acc, OverflowMode mode, NodeId node, int64_t flat) {
  if (v >= acc.min_value() && v <= acc.max_value()) return v;
  if (mode == OverflowMode::kTrap) throw OverflowError(node, flat, v);
  return std::clamp(v, acc.min_value(), acc.max_value());
}

// Round-half-away-from-zero of (v * multiplier) >> shift, exact in int64.
int64_t fixed_point_rescale(int64_t v, int64_t multiplier, int shift) {
  int64_t p = v * multiplier;
  if (shift == 0) return p;
  int64_t nudge = int64_t{1} << (shift - 1);
  return p >= 0 ? (p + nudge) >> shift : -((-p + nudge) >> shift);
}

std::vector<int64_t> conv_out_shape(const std::vector<int64_t>& d, const std::vector<int64_t>& w,
                                    const std::vector<int64_t>& strides,
                                    const std::vector<int64_t>& padding) {
  int64_t oh = (d[2] + 2 * padding[0] - w[2]) / strides[0] + 1;
  int64_t ow = (d[3] + 2 * padding[1] - w[3]) / strides[1] + 1;
  return {d[0], w[0], oh, ow};
}

QParams qparams_from_attrs(const Node& n) {
  QParams p;
  p.passthrough = n.attr_or<bool>("passthrough", true);
  if (!p.passthrough) {
    p.threshold = n.attr<double>("threshold");
    p.bit = n.attr<int>("bit");
    p.sign = n.attr<int>("sign");
    p.zero_point = n.attr_or<int64_t>("zero_point", 0);
    p.in_dtype = parse_dtype(n.attr_or<std::string>("in_dtype", "int8"));
    p.out_dtype = parse_dtype(n.attr_or<std::string>("out_dtype", p.in_dtype.name()));
  }
  if (n.has_attr("acc_dtype")) {
    p.acc_dtype = parse_dtype(n.attr<std::string>("acc_dtype"));
    p.acc_scale = n.attr<double>("acc_scale");
  }
  return p;
}

struct ExecConfig {
  const SimBinding* binding = nullptr;
  OverflowMode mode = OverflowMode::kSaturate;
  bool integer_regime = false;  // realized graphs: integer ops allowed
};

class Executor {
 public:
  Executor(const Graph& g, const ExecConfig& config) : g_(g), config_(config) {}

  std::vector<Tensor> run(const FeedMap& feed) {
    run_all(feed);
    std::vector<Tensor> outputs;
    for (const PortRef& out : g_.outputs()) {
      auto it = values_.find(out.node);
      if (it == values_.end()) throw EvalError("graph output was never computed");
      outputs.push_back(it->second);
    }
    return outputs;
  }

  const std::map<NodeId, Tensor>& run_all(const FeedMap& feed) {
    values_.clear();
    for (NodeId id : traversal_order(g_)) {
      eval_node(g_.node(id), feed);
    }
    return values_;
  }

 private:
  const Graph& g_;
  ExecConfig config_;
  std::map<NodeId, Tensor> values_;

  const Tensor& in(const Node& n, int port) {
    auto edges = g_.in_edges(n.id);
    if (port >= static_cast<int>(edges.size()) || edges[static_cast<size_t>(port)] == nullptr) {
      throw EvalError(op_name(n.op) + " node " + std::to_string(n.id) + " missing input " +
                      std::to_string(port));
    }
    return values_.at(edges[static_cast<size_t>(port)]->src.node);
  }

  int arity(const Node& n) {
    auto edges = g_.in_edges(n.id);
    return static_cast<int>(edges.size());
  }

  void eval_node(const Node& n, const FeedMap& feed) {
    switch (n.op) {
      case OpKind::kInput: {
        std::string name = n.attr_or<std::string>("name", "");
        auto it = feed.find(name);
        if (it == feed.end()) throw EvalError("missing input tensor: " + name);
        auto shape = n.attr<std::vector<int64_t>>("shape");
        if (it->second.shape() != shape) {
          throw EvalError("input " + name + " has shape " + shape_to_string(it->second.shape()) +
                          ", expected " + shape_to_string(shape));
        }
        values_[n.id] = it->second;
        return;
      }
      case OpKind::kConstant:
        values_[n.id] = *n.payload;
        return;
      case OpKind::kConv2d:
        values_[n.id] = conv2d(n);
        return;
      case OpKind::kDense:
        values_[n.id] = dense(n);
        return;
      case OpKind::kAdd:
        values_[n.id] = add(n);
        return;
      case OpKind::kRelu:
        values_[n.id] = relu(n);
        return;
      case OpKind::kClip:
        values_[n.id] = clip(n);
        return;
      case OpKind::kMaxPool2d:
        values_[n.id] = max_pool2d(n);
        return;
      case OpKind::kGlobalAvgPool2d:
        values_[n.id] = global_avg_pool2d(n);
        return;
      case OpKind::kFlatten:
        values_[n.id] = flatten(n);
        return;
      case OpKind::kSimulatedQuantize: {
        QParams p;
        if (config_.binding) {
          auto it = config_.binding->find(n.id);
          p = it != config_.binding->end() ? it->second : qparams_from_attrs(n);
        } else {
          p = qparams_from_attrs(n);
        }
        values_[n.id] = simulated_quantize(in(n, 0), p);
        return;
      }
      case OpKind::kQuantize:
        require_integer_regime(n);
        values_[n.id] = quantize(n);
        return;
      case OpKind::kDequantize:
        require_integer_regime(n);
        values_[n.id] = dequantize(n);
        return;
      case OpKind::kRequantize:
        require_integer_regime(n);
        values_[n.id] = requantize(n);
        return;
    }
    throw EvalError("bad op kind");
  }

  void require_integer_regime(const Node& n) {
    if (!config_.integer_regime) {
      throw EvalError("op " + op_name(n.op) + " (node " + std::to_string(n.id) +
                      ") is not supported in the fp32 regime");
    }
  }

  DType acc_dtype_of(const Node& n) {
    if (!n.has_attr("acc_dtype")) {
      throw EvalError("node " + std::to_string(n.id) + " (" + op_name(n.op) +
                      ") missing accumulator dtype annotation");
    }
    return parse_dtype(n.attr<std::string>("acc_dtype"));
  }

  Tensor conv2d(const Node& n) {
    const Tensor& d = in(n, 0);
    const Tensor& w = in(n, 1);
    const Tensor* bias = arity(n) > 2 ? &in(n, 2) : nullptr;
    auto strides = n.attr_or<std::vector<int64_t>>("strides", {1, 1});
    auto padding = n.attr_or<std::vector<int64_t>>("padding", {0, 0});
    if (d.shape().size() != 4 || w.shape().size() != 4 || d.shape()[1] != w.shape()[1]) {
      throw EvalError("conv2d shape mismatch at node " + std::to_string(n.id));
    }
    auto out_shape = conv_out_shape(d.shape(), w.shape(), strides, padding);
    const int64_t N = d.shape()[0], C = d.shape()[1], H = d.shape()[2], W = d.shape()[3];
    const int64_t O = w.shape()[0], KH = w.shape()[2], KW = w.shape()[3];
    const int64_t OH = out_shape[2], OW = out_shape[3];

    if (d.dtype().is_float()) {
      if (!w.dtype().is_float() || (bias && !bias->dtype().is_float())) {
        throw EvalError("conv2d mixed float/integer operands at node " + std::to_string(n.id));
      }
      Tensor out = Tensor::zeros(f32, out_shape);
      auto dd = d.floats();
      auto ww = w.floats();
      auto oo = out.floats();
      for (int64_t nn = 0; nn < N; ++nn)
        for (int64_t o = 0; o < O; ++o)
          for (int64_t oh = 0; oh < OH; ++oh)
            for (int64_t ow = 0; ow < OW; ++ow) {
              double acc = 0.0;
              for (int64_t c = 0; c < C; ++c)
                for (int64_t kh = 0; kh < KH; ++kh)
                  for (int64_t kw = 0; kw < KW; ++kw) {
                    int64_t ih = oh * strides[0] - padding[0] + kh;
                    int64_t iw = ow * strides[1] - padding[1] + kw;
                    if (ih < 0 || ih >= H || iw < 0 || iw >= W) continue;
                    acc += static_cast<double>(dd[((nn * C + c) * H + ih) * W + iw]) *
                           static_cast<double>(ww[((o * C + c) * KH + kh) * KW + kw]);
                  }
              if (bias) acc += static_cast<double>(bias->floats()[o]);
              oo[((nn * O + o) * OH + oh) * OW + ow] = static_cast<float>(acc);
            }
      return out;
    }

    DType acc_dtype = acc_dtype_of(n);
    auto zps = n.attr_or<std::vector<int64_t>>("in_zero_points", {0, 0});
    Tensor out = Tensor::zeros(acc_dtype, out_shape);
    auto dd = d.ints();
    auto ww = w.ints();
    auto oo = out.ints();
    int64_t flat = 0;
    for (int64_t nn = 0; nn < N; ++nn)
      for (int64_t o = 0; o < O; ++o)
        for (int64_t oh = 0; oh < OH; ++oh)
          for (int64_t ow = 0; ow < OW; ++ow, ++flat) {
            int64_t acc = 0;
            for (int64_t c = 0; c < C; ++c)
              for (int64_t kh = 0; kh < KH; ++kh)
                for (int64_t kw = 0; kw < KW; ++kw) {
                  int64_t ih = oh * strides[0] - padding[0] + kh;
                  int64_t iw = ow * strides[1] - padding[1] + kw;
                  if (ih < 0 || ih >= H || iw < 0 || iw >= W) continue;
                  int64_t dv = dd[((nn * C + c) * H + ih) * W + iw] - zps[0];
                  int64_t wv = ww[((o * C + c) * KH + kh) * KW + kw] - zps[1];
                  acc += dv * wv;
                }
            if (bias) acc += bias->ints()[o];
            oo[((nn * O + o) * OH + oh) * OW + ow] = static_cast<int32_t>(
                clamp_or_trap(acc, acc_dtype, config_.mode, n.id, flat));
          }
    return out;
  }

  Tensor dense(const Node& n) {
    const Tensor& d = in(n, 0);
    const Tensor& w = in(n, 1);
    const Tensor* bias = arity(n) > 2 ? &in(n, 2) : nullptr;
    if (d.shape().size() != 2 || w.shape().size() != 2 || d.shape()[1] != w.shape()[1]) {
      throw EvalError("dense shape mismatch at node " + std::to_string(n.id));
    }
    const int64_t N = d.shape()[0], K = d.shape()[1], M = w.shape()[0];

    if (d.dtype().is_float()) {
      Tensor out = Tensor::zeros(f32, {N, M});
      auto dd = d.floats();
      auto ww = w.floats();
      auto oo = out.floats();
      for (int64_t nn = 0; nn < N; ++nn)
        for (int64_t m = 0; m < M; ++m) {
          double acc = 0.0;
          for (int64_t k = 0; k < K; ++k) {
            acc += static_cast<double>(dd[nn * K + k]) * static_cast<double>(ww[m * K + k]);
          }
          if (bias) acc += static_cast<double>(bias->floats()[m]);
          oo[nn * M + m] = static_cast<float>(acc);
        }
      return out;
    }

    DType acc_dtype = acc_dtype_of(n);
    auto zps = n.attr_or<std::vector<int64_t>>("in_zero_points", {0, 0});
    Tensor out = Tensor::zeros(acc_dtype, {N, M});
    auto dd = d.ints();
    auto ww = w.ints();
    auto oo = out.ints();
    for (int64_t nn = 0; nn < N; ++nn)
      for (int64_t m = 0; m < M; ++m) {
        int64_t acc = 0;
        for (int64_t k = 0; k < K; ++k) {
          acc += (int64_t{dd[nn * K + k]} - zps[0]) * (int64_t{ww[m * K + k]} - zps[1]);
        }
        if (bias) acc += bias->ints()[m];
        oo[nn * M + m] =
            static_cast<int32_t>(clamp_or_trap(acc, acc_dtype, config_.mode, n.id, nn * M + m));
      }
    return out;
  }

  Tensor add(const Node& n) {
    const Tensor& a = in(n, 0);
    const Tensor& b = in(n, 1);
    if (!a.same_shape(b)) throw EvalError("add operand shapes differ at node " + std::to_string(n.id));
    if (a.dtype().is_float() != b.dtype().is_float()) {
      throw EvalError("add mixes float and integer operands at node " + std::to_string(n.id));
    }
    if (a.dtype().is_float()) {
      Tensor out = a;
      auto bo = b.floats();
      auto oo = out.floats();
      for (size_t i = 0; i < oo.size(); ++i) oo[i] += bo[i];
      return out;
    }
    DType acc_dtype = acc_dtype_of(n);
    Tensor out = Tensor::zeros(acc_dtype, a.shape());
    auto aa = a.ints();
    auto bb = b.ints();
    auto oo = out.ints();
    for (size_t i = 0; i < oo.size(); ++i) {
      int64_t acc = int64_t{aa[i]} + int64_t{bb[i]};
      oo[i] = static_cast<int32_t>(
          clamp_or_trap(acc, acc_dtype, config_.mode, n.id, static_cast<int64_t>(i)));
    }
    return out;
  }

  Tensor relu(const Node& n) {
    const Tensor& x = in(n, 0);
    Tensor out = x;
    if (x.dtype().is_float()) {
      for (float& v : out.floats()) v = std::max(v, 0.0f);
    } else {
      int32_t zp = static_cast<int32_t>(n.attr_or<int64_t>("zero_point", 0));
      for (int32_t& v : out.ints()) v = std::max(v, zp);
    }
    return out;
  }

  Tensor clip(const Node& n) {
    const Tensor& x = in(n, 0);
    Tensor out = x;
    if (x.dtype().is_float()) {
      float lo = static_cast<float>(n.attr<double>("a_min"));
      float hi = static_cast<float>(n.attr<double>("a_max"));
      for (float& v : out.floats()) v = std::clamp(v, lo, hi);
    } else {
      int32_t lo = static_cast<int32_t>(n.attr<int64_t>("q_min"));
      int32_t hi = static_cast<int32_t>(n.attr<int64_t>("q_max"));
      for (int32_t& v : out.ints()) v = std::clamp(v, lo, hi);
    }
    return out;
  }

  Tensor max_pool2d(const Node& n) {
    const Tensor& x = in(n, 0);
    auto pool = n.attr<std::vector<int64_t>>("pool_size");
    auto strides = n.attr_or<std::vector<int64_t>>("strides", pool);
    auto padding = n.attr_or<std::vector<int64_t>>("padding", {0, 0});
    const auto& s = x.shape();
    const int64_t N = s[0], C = s[1], H = s[2], W = s[3];
    const int64_t OH = (H + 2 * padding[0] - pool[0]) / strides[0] + 1;
    const int64_t OW = (W + 2 * padding[1] - pool[1]) / strides[1] + 1;
    Tensor out = Tensor::zeros(x.dtype(), {N, C, OH, OW});

    auto reduce = [&](auto src, auto dst, auto lowest) {
      for (int64_t nn = 0; nn < N; ++nn)
        for (int64_t c = 0; c < C; ++c)
          for (int64_t oh = 0; oh < OH; ++oh)
            for (int64_t ow = 0; ow < OW; ++ow) {
              auto best = lowest;
              for (int64_t kh = 0; kh < pool[0]; ++kh)
                for (int64_t kw = 0; kw < pool[1]; ++kw) {
                  int64_t ih = oh * strides[0] - padding[0] + kh;
                  int64_t iw = ow * strides[1] - padding[1] + kw;
                  if (ih < 0 || ih >= H || iw < 0 || iw >= W) continue;
                  best = std::max(best, src[((nn * C + c) * H + ih) * W + iw]);
                }
              dst[((nn * C + c) * OH + oh) * OW + ow] = best;
            }
    };
    if (x.dtype().is_float()) {
      reduce(x.floats(), out.floats(), std::numeric_limits<float>::lowest());
    } else {
      reduce(x.ints(), out.ints(), std::numeric_limits<int32_t>::lowest());
    }
    return out;
  }

  Tensor global_avg_pool2d(const Node& n) {
    const Tensor& x = in(n, 0);
    if (x.dtype().is_integer()) {
      throw EvalError("integer global_avg_pool2d is not supported (node " +
                      std::to_string(n.id) + ")");
    }
    const auto& s = x.shape();
    const int64_t N = s[0], C = s[1], H = s[2], W = s[3];
    Tensor out = Tensor::zeros(f32, {N, C, 1, 1});
    auto xx = x.floats();
    auto oo = out.floats();
    for (int64_t nn = 0; nn < N; ++nn)
      for (int64_t c = 0; c < C; ++c) {
        double acc = 0.0;
        for (int64_t i = 0; i < H * W; ++i) acc += xx[(nn * C + c) * H * W + i];
        oo[nn * C + c] = static_cast<float>(acc / static_cast<double>(H * W));
      }
    return out;
  }

  Tensor flatten(const Node& n) {
    const Tensor& x = in(n, 0);
    int64_t rest = 1;
    for (size_t i = 1; i < x.shape().size(); ++i) rest *= x.shape()[i];
    std::vector<int64_t> shape{x.shape()[0], rest};
    if (x.dtype().is_float()) {
      return Tensor::from_floats(shape, {x.floats().begin(), x.floats().end()});
    }
    return Tensor::from_ints(x.dtype(), shape, {x.ints().begin(), x.ints().end()});
  }

  Tensor quantize(const Node& n) {
    const Tensor& x = in(n, 0);
    if (!x.dtype().is_float()) throw EvalError("quantize input must be float32");
    double scale = n.attr<double>("scale");
    int64_t zp = n.attr_or<int64_t>("zero_point", 0);
    int64_t q_min = n.attr<int64_t>("q_min");
    int64_t q_max = n.attr<int64_t>("q_max");
    DType out_dtype = parse_dtype(n.attr<std::string>("out_dtype"));
    Tensor out = Tensor::zeros(out_dtype, x.shape());
    auto xx = x.floats();
    auto oo = out.ints();
    for (size_t i = 0; i < oo.size(); ++i) {
      int64_t q = std::llround(static_cast<double>(xx[i]) / scale) + zp;
      oo[i] = static_cast<int32_t>(std::clamp(q, q_min, q_max));
    }
    return out;
  }

  Tensor dequantize(const Node& n) {
    const Tensor& x = in(n, 0);
    if (!x.dtype().is_integer()) throw EvalError("dequantize input must be integer");
    double scale = n.attr<double>("scale");
    int64_t zp = n.attr_or<int64_t>("zero_point", 0);
    Tensor out = Tensor::zeros(f32, x.shape());
    auto xx = x.ints();
    auto oo = out.floats();
    for (size_t i = 0; i < oo.size(); ++i) {
      oo[i] = static_cast<float>(static_cast<double>(xx[i] - zp) * scale);
    }
    return out;
  }

  Tensor requantize(const Node& n) {
    const Tensor& x = in(n, 0);
    if (!x.dtype().is_integer()) throw EvalError("requantize input must be integer");
    int64_t multiplier = n.attr<int64_t>("multiplier");
    int shift = n.attr<int>("shift");
    int64_t in_zp = n.attr_or<int64_t>("in_zero_point", 0);
    int64_t out_zp = n.attr_or<int64_t>("zero_point", 0);
    int64_t q_min = n.attr<int64_t>("q_min");
    int64_t q_max = n.attr<int64_t>("q_max");
    DType out_dtype = parse_dtype(n.attr<std::string>("out_dtype"));
    Tensor out = Tensor::zeros(out_dtype, x.shape());
    auto xx = x.ints();
    auto oo = out.ints();
    for (size_t i = 0; i < oo.size(); ++i) {
      int64_t q = fixed_point_rescale(int64_t{xx[i]} - in_zp, multiplier, shift) + out_zp;
      oo[i] = static_cast<int32_t>(std::clamp(q, q_min, q_max));
    }
    return out;
  }
};

}  // namespace

std::vector<Tensor> eval_fp32(const Graph& g, const FeedMap& feed, const SimBinding* binding) {
  ExecConfig config;
  config.binding = binding;
  config.integer_regime = false;
  return Executor(g, config).run(feed);
}

std::map<NodeId, Tensor> eval_fp32_values(const Graph& g, const FeedMap& feed,
                                          const SimBinding* binding) {
  ExecConfig config;
  config.binding = binding;
  config.integer_regime = false;
  Executor exec(g, config);
  return exec.run_all(feed);
}

std::vector<Tensor> eval_int(const Graph& g, const FeedMap& feed, OverflowMode mode) {
  if (g.contains_op(OpKind::kSimulatedQuantize)) {
    throw EvalError("eval_int expects a realized graph without simulated_quantize nodes");
  }
  ExecConfig config;
  config.mode = mode;
  config.integer_regime = true;
  return Executor(g, config).run(feed);
}

std::vector<Tensor> eval_model(const Graph& g, const FeedMap& feed, OverflowMode mode,
                               const SimBinding* binding) {
  if (g.is_realized()) return eval_int(g, feed, mode);
  return eval_fp32(g, feed, binding);
}

FeedMap feed_for(const Graph& g, const Sample& sample) {
  if (sample.inputs.size() != g.inputs().size()) {
    throw EvalError("sample provides " + std::to_string(sample.inputs.size()) +
                    " tensors for " + std::to_string(g.inputs().size()) + " graph inputs");
  }
  FeedMap feed;
  for (size_t i = 0; i < g.inputs().size(); ++i) {
    const Node& n = g.node(g.inputs()[i]);
    std::string name = n.attr_or<std::string>("name", "");
    feed[name] = sample.inputs[i];
  }
  return feed;
}

int64_t argmax_class(const Tensor& scores) {
  auto ss = scores.floats();
  if (ss.empty()) throw EvalError("empty score vector");
  int64_t best = 0;
  for (size_t i = 1; i < ss.size(); ++i) {
    if (ss[i] > ss[best]) best = static_cast<int64_t>(i);
  }
  return best;
}

std::vector<int64_t> predict_top1(const Graph& g, const Dataset& dataset, int workers,
                                  const SimBinding* binding) {
  std::vector<int64_t> preds(dataset.size(), -1);
  parallel_for(dataset.size(), workers, [&](size_t i) {
    auto outputs = eval_model(g, feed_for(g, dataset[i]), OverflowMode::kSaturate, binding);
    if (outputs.empty()) throw EvalError("model has no outputs");
    Tensor scores = outputs[0];
    if (scores.dtype().is_integer()) {
      throw EvalError("model output is not dequantized to a float score vector");
    }
    preds[i] = argmax_class(scores);
  });
  return preds;
}

double top1_agreement(const Graph& g_ref, const Graph& g_test, const Dataset& dataset,
                      int workers) {
  if (dataset.empty()) throw EvalError("empty dataset");
  if (g_ref.inputs().size() != g_test.inputs().size()) {
    throw EvalError("models have different input signatures");
  }
  std::vector<int64_t> a = predict_top1(g_ref, dataset, workers);
  std::vector<int64_t> b = predict_top1(g_test, dataset, workers);
  int64_t same = 0;
  for (size_t i = 0; i < a.size(); ++i) same += (a[i] == b[i]) ? 1 : 0;
  return static_cast<double>(same) / static_cast<double>(a.size());
}

double labeled_accuracy(const Graph& g, const Dataset& dataset, int workers) {
  std::vector<int64_t> preds = predict_top1(g, dataset, workers);
  int64_t labeled = 0;
  int64_t correct = 0;
  for (size_t i = 0; i < dataset.size(); ++i) {
    if (!dataset[i].label.has_value()) continue;
    ++labeled;
    if (preds[i] == *dataset[i].label) ++correct;
  }
  if (labeled == 0) throw EvalError("dataset carries no labels");
  return static_cast<double>(correct) / static_cast<double>(labeled);
}

double mean_abs_output_diff(const Graph& g_a, const Graph& g_b, const Dataset& dataset,
                            int workers) {
  if (dataset.empty()) throw EvalError("empty dataset");
  std::vector<double> per_sample(dataset.size(), 0.0);
  parallel_for(dataset.size(), workers, [&](size_t i) {
    Tensor a = eval_model(g_a, feed_for(g_a, dataset[i]))[0];
    Tensor b = eval_model(g_b, feed_for(g_b, dataset[i]))[0];
    if (!a.same_shape(b)) throw EvalError("output shape mismatch");
    auto aa = a.floats();
    auto bb = b.floats();
    double acc = 0.0;
    for (size_t k = 0; k < aa.size(); ++k) {
      acc += std::fabs(static_cast<double>(aa[k]) - static_cast<double>(bb[k]));
    }
    per_sample[i] = acc / static_cast<double>(aa.size());
  });
  double total = 0.0;
  for (double v : per_sample) total += v;
  return total / static_cast<double>(per_sample.size());
}

}  // namespace quantc
