// Copyright (c) 2026 quantc authors
// SPDX-License-Identifier: Apache-2.0

#include "quantc/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "quantc/parallel.hpp"

namespace quantc {

int64_t EdgeStats::total_count() const {
  int64_t n = 0;
  for (int64_t c : counts) n += c;
  return n;
}

double EdgeStats::bin_upper_edge(int i) const {
  return absmax * (static_cast<double>(i + 1) / static_cast<double>(counts.size()));
}

namespace {

// Bin index of an absolute value: bin i covers (i*w, (i+1)*w], zeros land in
// bin 0, absmax lands in the last bin.
int bin_index(double a, double absmax, int bins) {
  if (a <= 0.0) return 0;
  double x = a / absmax * static_cast<double>(bins);
  int idx = static_cast<int>(std::ceil(x)) - 1;
  return std::clamp(idx, 0, bins - 1);
}

}  // namespace

CalibrationStats collect_stats(const Graph& g, const Dataset& dataset, int bins,
                               const std::vector<int>& edge_indices, int workers) {
  if (dataset.empty()) throw CalibrationError("calibration dataset is empty");
  if (bins < 2) throw CalibrationError("histogram needs at least 2 bins");

  std::vector<Edge> edges = edge_order(g);
  std::vector<int> targets = edge_indices;
  if (targets.empty()) {
    for (size_t k = 0; k < edges.size(); ++k) targets.push_back(static_cast<int>(k));
  }
  for (int k : targets) {
    if (k < 0 || k >= static_cast<int>(edges.size())) {
      throw CalibrationError("edge index " + std::to_string(k) + " out of range");
    }
  }

  CalibrationStats stats;
  for (int k : targets) {
    EdgeStats e;
    e.min = std::numeric_limits<double>::infinity();
    e.max = -std::numeric_limits<double>::infinity();
    e.counts.assign(static_cast<size_t>(bins), 0);
    stats.per_edge[k] = e;
  }

  // Pass 1: exact extrema. Per-sample partials merge associatively, so the
  // sample loop parallelizes; the merge runs in fixed sample order.
  struct Partial {
    std::map<int, std::pair<double, double>> minmax;
  };
  std::vector<Partial> partials(dataset.size());
  parallel_for(dataset.size(), workers, [&](size_t i) {
    auto values = eval_fp32_values(g, feed_for(g, dataset[i]));
    for (int k : targets) {
      const Tensor& t = values.at(edges[static_cast<size_t>(k)].src.node);
      double lo = std::numeric_limits<double>::infinity();
      double hi = -std::numeric_limits<double>::infinity();
      for (float v : t.floats()) {
        lo = std::min(lo, static_cast<double>(v));
        hi = std::max(hi, static_cast<double>(v));
      }
      partials[i].minmax[k] = {lo, hi};
    }
  });
  for (const Partial& p : partials) {
    for (const auto& [k, mm] : p.minmax) {
      EdgeStats& e = stats.per_edge[k];
      e.min = std::min(e.min, mm.first);
      e.max = std::max(e.max, mm.second);
    }
  }
  for (auto& [k, e] : stats.per_edge) {
    e.absmax = std::max(std::fabs(e.min), std::fabs(e.max));
    e.sample_count = static_cast<int64_t>(dataset.size());
  }

  // Pass 2: histogram of absolute values against the final absmax.
  std::vector<std::map<int, std::vector<int64_t>>> hist_partials(dataset.size());
  parallel_for(dataset.size(), workers, [&](size_t i) {
    auto values = eval_fp32_values(g, feed_for(g, dataset[i]));
    for (int k : targets) {
      const Tensor& t = values.at(edges[static_cast<size_t>(k)].src.node);
      double absmax = stats.per_edge[k].absmax;
      std::vector<int64_t> counts(static_cast<size_t>(bins), 0);
      for (float v : t.floats()) {
        double a = std::fabs(static_cast<double>(v));
        counts[static_cast<size_t>(absmax > 0.0 ? bin_index(a, absmax, bins) : 0)]++;
      }
      hist_partials[i][k] = std::move(counts);
    }
  });
  for (const auto& p : hist_partials) {
    for (const auto& [k, counts] : p) {
      EdgeStats& e = stats.per_edge[k];
      for (size_t b = 0; b < counts.size(); ++b) e.counts[b] += counts[b];
    }
  }
  return stats;
}

double threshold_max(const EdgeStats& stats) {
  return stats.absmax > 0.0 ? stats.absmax : kDegenerateThreshold;
}

double threshold_quantile(const EdgeStats& stats, double q) {
  if (!(q > 0.0) || q > 1.0) throw CalibrationError("quantile must be in (0, 1]");
  if (stats.absmax <= 0.0) return kDegenerateThreshold;
  int64_t total = stats.total_count();
  if (total == 0) throw CalibrationError("histogram is empty");
  int64_t cum = 0;
  for (size_t b = 0; b < stats.counts.size(); ++b) {
    cum += stats.counts[b];
    if (static_cast<double>(cum) >= q * static_cast<double>(total)) {
      return stats.bin_upper_edge(static_cast<int>(b));
    }
  }
  return stats.absmax;
}

namespace {

constexpr double kKlSmoothing = 1e-9;

double kl_divergence(std::vector<double> p, std::vector<double> q) {
  for (double& v : p) {
    if (v == 0.0) v = kKlSmoothing;
  }
  for (double& v : q) {
    if (v == 0.0) v = kKlSmoothing;
  }
  double p_sum = 0.0, q_sum = 0.0;
  for (double v : p) p_sum += v;
  for (double v : q) q_sum += v;
  double kl = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    double pi = p[i] / p_sum;
    double qi = q[i] / q_sum;
    kl += pi * std::log(pi / qi);
  }
  return kl;
}

}  // namespace

double threshold_kl(const EdgeStats& stats, int target_bit) {
  if (target_bit < 1 || target_bit > 16) throw CalibrationError("target_bit out of range");
  int bins = static_cast<int>(stats.counts.size());
  int levels = 1 << target_bit;
  if (bins < levels) {
    throw CalibrationError("histogram has fewer bins than 2^target_bit levels");
  }
  if (stats.total_count() == 0) throw CalibrationError("histogram is empty");
  if (stats.absmax <= 0.0) return kDegenerateThreshold;

  double best_kl = std::numeric_limits<double>::infinity();
  int best_i = levels;
  for (int i = levels; i <= bins; ++i) {
    // Reference distribution: histogram clipped at bin i, outliers folded
    // into the last kept bin.
    std::vector<double> p(stats.counts.begin(), stats.counts.begin() + i);
    for (int b = i; b < bins; ++b) p[static_cast<size_t>(i - 1)] += static_cast<double>(stats.counts[static_cast<size_t>(b)]);

    // Quantized distribution: p down-sampled to `levels` then expanded back,
    // each group's mass spread uniformly over its nonzero member bins.
    std::vector<double> q(static_cast<size_t>(i), 0.0);
    int merged = i / levels;
    for (int j = 0; j < levels; ++j) {
      int start = j * merged;
      int end = (j == levels - 1) ? i : (j + 1) * merged;
      double sum = 0.0;
      int nonzero = 0;
      for (int b = start; b < end; ++b) {
        sum += p[static_cast<size_t>(b)];
        if (p[static_cast<size_t>(b)] != 0.0) ++nonzero;
      }
      if (nonzero == 0) continue;
      double value = sum / static_cast<double>(nonzero);
      for (int b = start; b < end; ++b) {
        if (p[static_cast<size_t>(b)] != 0.0) q[static_cast<size_t>(b)] = value;
      }
    }

    double kl = kl_divergence(std::move(p), std::move(q));
    if (kl < best_kl) {
      best_kl = kl;
      best_i = i;
    }
  }
  return stats.absmax * (static_cast<double>(best_i) / static_cast<double>(bins));
}

double round_pow2(double threshold) {
  if (!(threshold > 0.0)) throw CalibrationError("round_pow2 needs a positive threshold");
  double e = std::floor(std::log2(threshold) + 0.5);  // half-up on the exponent
  return std::exp2(e);
}

std::map<int, double> estimate_thresholds(const CalibrationStats& stats,
                                          const ThresholdConfig& config) {
  std::map<int, double> result;
  for (const auto& [k, e] : stats.per_edge) {
    double t = 0.0;
    switch (config.method) {
      case ThresholdMethod::kMax:
        t = threshold_max(e);
        break;
      case ThresholdMethod::kQuantile:
        t = e.absmax > 0.0 ? threshold_quantile(e, config.quantile) : kDegenerateThreshold;
        break;
      case ThresholdMethod::kKl:
        t = threshold_kl(e, config.kl_bits);
        break;
    }
    if (config.pow2) t = round_pow2(t);
    result[k] = t;
  }
  return result;
}

}  // namespace quantc
