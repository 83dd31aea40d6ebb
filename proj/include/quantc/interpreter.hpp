// Copyright (c) 2026 quantc authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "quantc/graph.hpp"
#include "quantc/simulate.hpp"

namespace quantc {

/// Graph inputs keyed by the input node's "name" attr.
using FeedMap = std::map<std::string, Tensor>;

/// Runtime override of simulated_quantize parameters, keyed by node id.
/// Lets one immutable simulated graph be evaluated under many candidate
/// bindings concurrently.
using SimBinding = std::map<NodeId, QParams>;

enum class OverflowMode { kSaturate, kTrap };

class EvalError : public std::runtime_error {
 public:
  explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

class OverflowError : public EvalError {
 public:
  OverflowError(NodeId node, int64_t flat_index, int64_t value);
  NodeId node;
  int64_t flat_index;
  int64_t value;
};

/// Reference float executor. simulated_quantize nodes apply module simulate
/// semantics, taking parameters from `binding` when given, else from attrs.
std::vector<Tensor> eval_fp32(const Graph& g, const FeedMap& feed,
                              const SimBinding* binding = nullptr);

/// eval_fp32 variant that keeps every node's output; calibration reads edge
/// tensors from it.
std::map<NodeId, Tensor> eval_fp32_values(const Graph& g, const FeedMap& feed,
                                          const SimBinding* binding = nullptr);

/// Reference integer executor for realized graphs. Arithmetic ops accumulate
/// in their annotated accumulator dtype; kSaturate clamps to its range,
/// kTrap throws OverflowError at the first out-of-range element.
std::vector<Tensor> eval_int(const Graph& g, const FeedMap& feed, OverflowMode mode);

/// Runs eval_int for realized graphs, eval_fp32 otherwise.
std::vector<Tensor> eval_model(const Graph& g, const FeedMap& feed,
                               OverflowMode mode = OverflowMode::kSaturate,
                               const SimBinding* binding = nullptr);

struct Sample {
  std::vector<Tensor> inputs;
  std::optional<int64_t> label;
};
using Dataset = std::vector<Sample>;

/// Feed for a sample, pairing graph inputs with sample tensors in order.
FeedMap feed_for(const Graph& g, const Sample& sample);

/// Index of the winning class in a score vector; ties break to the lowest index.
int64_t argmax_class(const Tensor& scores);

/// Fraction of samples where both graphs pick the same top-1 class.
double top1_agreement(const Graph& g_ref, const Graph& g_test,
                      const Dataset& dataset, int workers = 0);

/// Per-sample top-1 classes of a model over a dataset.
std::vector<int64_t> predict_top1(const Graph& g, const Dataset& dataset,
                                  int workers = 0, const SimBinding* binding = nullptr);

/// Fraction of labeled samples predicted correctly (unlabeled samples are skipped).
double labeled_accuracy(const Graph& g, const Dataset& dataset, int workers = 0);

/// Mean absolute difference between first outputs of two models over a dataset.
double mean_abs_output_diff(const Graph& g_a, const Graph& g_b,
                            const Dataset& dataset, int workers = 0);

}  // namespace quantc
