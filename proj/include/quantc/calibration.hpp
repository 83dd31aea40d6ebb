// Copyright (c) 2026 quantc authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "quantc/graph.hpp"
#include "quantc/interpreter.hpp"

namespace quantc {

/// Value statistics of one edge over the calibration run. The histogram
/// counts absolute values over [0, absmax] in `counts.size()` equal bins;
/// bin i covers (i*w, (i+1)*w] with zeros landing in bin 0.
struct EdgeStats {
  double min = 0.0;
  double max = 0.0;
  double absmax = 0.0;
  std::vector<int64_t> counts;
  int64_t sample_count = 0;

  int64_t total_count() const;
  /// Upper edge of bin i (absmax * (i+1) / bins).
  double bin_upper_edge(int i) const;
};

struct CalibrationStats {
  std::map<int, EdgeStats> per_edge;  // canonical edge index -> stats
  uint64_t dataset_fingerprint = 0;
  uint64_t graph_fingerprint = 0;
};

class CalibrationError : public std::runtime_error {
 public:
  explicit CalibrationError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr int kDefaultHistogramBins = 2048;
inline constexpr double kDegenerateThreshold = 1e-8;

/// Runs the fp32 graph over the dataset and collects stats for the edges in
/// `edge_indices` (canonical indices; empty means every edge). min/max/absmax
/// are exact over all samples; histograms are binned against the final absmax.
CalibrationStats collect_stats(const Graph& g, const Dataset& dataset,
                               int bins = kDefaultHistogramBins,
                               const std::vector<int>& edge_indices = {},
                               int workers = 0);

/// Max estimator: the exact absolute maximum (epsilon-substituted when 0).
double threshold_max(const EdgeStats& stats);

/// Quantile estimator: smallest bin upper edge whose cumulative fraction of
/// absolute values reaches q. q = 1 returns absmax.
double threshold_quantile(const EdgeStats& stats, double q);

/// KL estimator: sweeps clip candidates at bin edges from 2^target_bit bins
/// up to the full histogram, scoring each by the KL divergence between the
/// clipped distribution and its 2^target_bit-level re-quantization; smallest
/// minimizer wins.
double threshold_kl(const EdgeStats& stats, int target_bit);

/// Nearest power of two: 2^round(log2(threshold)), half-up on the exponent.
double round_pow2(double threshold);

enum class ThresholdMethod { kMax, kQuantile, kKl };

struct ThresholdConfig {
  ThresholdMethod method = ThresholdMethod::kQuantile;
  double quantile = 0.99;
  int kl_bits = 8;
  bool pow2 = false;
};

/// Applies one estimator (plus optional power-of-two rounding) to every edge.
std::map<int, double> estimate_thresholds(const CalibrationStats& stats,
                                          const ThresholdConfig& config);

}  // namespace quantc
