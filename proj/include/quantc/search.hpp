// Copyright (c) 2026 quantc authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "quantc/calibration.hpp"
#include "quantc/graph.hpp"
#include "quantc/hwspec.hpp"
#include "quantc/interpreter.hpp"
#include "quantc/realize.hpp"
#include "quantc/topology.hpp"

namespace quantc {

inline constexpr int kDefaultMinBit = 4;

class SearchError : public std::runtime_error {
 public:
  explicit SearchError(const std::string& what) : std::runtime_error(what) {}
};

struct BitRange {
  int edge_index = -1;
  int lo = kDefaultMinBit;
  int hi = 8;
};

/// Effective bit per searchable edge, in canonical edge order.
using Candidate = std::vector<int>;

/// Inclusive per-edge bit ranges over the searchable simulated edges, in
/// canonical edge order. Fixed float32 boundary edges are excluded.
struct SearchSpace {
  std::vector<BitRange> ranges;

  size_t size() const { return ranges.size(); }
  Candidate all_hi() const;
  Candidate all_lo() const;
  bool contains(const Candidate& c) const;
};

struct TraceRecord {
  int64_t iteration = 0;
  Candidate bits;
  double loss = 0.0;
  bool accepted = false;
};

struct SearchTrace {
  Json header = Json::object();
  std::vector<TraceRecord> records;
};

struct SearchResult {
  Candidate best;
  double best_loss = 0.0;
  int64_t evaluations = 0;
  SearchTrace trace;
};

using LossFn = std::function<double(const Candidate&)>;

SearchSpace build_search_space(const Graph& g, const Topology& t, const HardwareSpec& spec,
                               int min_bit = kDefaultMinBit);

/// Product of range sizes; exact at any edge count.
boost::multiprecision::cpp_int space_size(const SearchSpace& space);

/// Algorithm: start from the all-max-bits candidate; walking edges in
/// canonical order, keep decrementing an edge's bit while the loss improves
/// (strictly under tol = 0), then move to the next edge; `rounds` full passes.
SearchResult greedy_search(const SearchSpace& space, const LossFn& eval, int rounds,
                           double tol = 0.0);

/// Metropolis walk over single-edge +-1 moves with energy exp(-cost/T) and
/// geometric cooling; returns the best candidate seen.
SearchResult anneal_search(const SearchSpace& space, const LossFn& eval, int steps,
                           double t0, double decay, uint64_t seed);

SearchResult random_search(const SearchSpace& space, const LossFn& eval, int n,
                           uint64_t seed);

/// Lexicographic enumeration of the whole space (first-found wins ties);
/// refuses spaces larger than `cap`.
SearchResult exhaustive_search(const SearchSpace& space, const LossFn& eval,
                               int64_t cap = 100000);

/// Binds candidates against one immutable simulated graph and scores them as
/// 1 - top1 agreement with the fp32 reference predictions on the calibration
/// set. Prepared once; loss()/losses() are safe to call concurrently.
class CandidateEvaluator {
 public:
  CandidateEvaluator(const Graph& sim_g, const HardwareSpec& spec, const Topology& topology,
                     const std::map<int, double>& thresholds, const CalibrationStats& stats,
                     const Dataset& calib, int min_bit = kDefaultMinBit, int workers = 0);
  ~CandidateEvaluator();
  CandidateEvaluator(const CandidateEvaluator&) = delete;
  CandidateEvaluator& operator=(const CandidateEvaluator&) = delete;

  const SearchSpace& space() const { return space_; }

  /// QParams for every simulated_quantize node under a candidate.
  SimBinding bind(const Candidate& c) const;

  double loss(const Candidate& c) const;

  /// Elementwise identical to mapping loss() over candidates; evaluation is
  /// spread over a read-only worker pool.
  std::vector<double> losses(std::span<const Candidate> candidates) const;

  /// Full per-edge decisions (storage dtype from signature matching).
  Strategy strategy_for(const Candidate& c) const;

  const std::vector<int64_t>& reference_predictions() const { return refs_; }
  int64_t evaluations() const { return evaluations_; }

 private:
  struct SqInfo;
  double edge_threshold(const SqInfo& info) const;
  const SqInfo* find_sq_by_slot(int slot) const;
  const Graph& sim_g_;
  const HardwareSpec& spec_;
  const Dataset& calib_;
  SearchSpace space_;
  std::map<int, double> thresholds_;
  std::map<int, std::pair<double, double>> edge_minmax_;
  std::vector<SqInfo> sq_nodes_;
  std::map<int, size_t> edge_to_slot_;  // canonical edge index -> space slot
  std::vector<int64_t> refs_;
  int workers_ = 0;
  mutable std::atomic<int64_t> evaluations_{0};
};

/// One-shot form of CandidateEvaluator::loss for a single candidate.
double evaluate_candidate(const Graph& sim_g, const HardwareSpec& spec,
                          const Topology& topology, const Candidate& c,
                          const std::map<int, double>& thresholds,
                          const CalibrationStats& stats, const Dataset& calib,
                          int min_bit = kDefaultMinBit, int workers = 0);

/// One-shot batched evaluation; losses match sequential evaluate_candidate calls.
std::vector<double> batched_evaluate(const Graph& sim_g, const HardwareSpec& spec,
                                     const Topology& topology,
                                     std::span<const Candidate> candidates,
                                     const std::map<int, double>& thresholds,
                                     const CalibrationStats& stats, const Dataset& calib,
                                     int min_bit = kDefaultMinBit, int workers = 0);

}  // namespace quantc
