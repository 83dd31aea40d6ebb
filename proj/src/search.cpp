// Copyright (c) 2026 quantc authors
// SPDX-License-Identifier: Apache-2.0

#include "quantc/search.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "quantc/parallel.hpp"

namespace quantc {

namespace {

// Explicit uniform mappings: std::uniform_*_distribution output is
// implementation-defined, which would break seeded reproducibility.
struct Rng {
  std::mt19937_64 engine;
  explicit Rng(uint64_t seed) : engine(seed) {}
  uint64_t next() { return engine(); }
  size_t index(size_t n) { return static_cast<size_t>(next() % n); }
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

}  // namespace

Candidate SearchSpace::all_hi() const {
  Candidate c;
  for (const BitRange& r : ranges) c.push_back(r.hi);
  return c;
}

Candidate SearchSpace::all_lo() const {
  Candidate c;
  for (const BitRange& r : ranges) c.push_back(r.lo);
  return c;
}

bool SearchSpace::contains(const Candidate& c) const {
  if (c.size() != ranges.size()) return false;
  for (size_t i = 0; i < c.size(); ++i) {
    if (c[i] < ranges[i].lo || c[i] > ranges[i].hi) return false;
  }
  return true;
}

SearchSpace build_search_space(const Graph& g, const Topology& t, const HardwareSpec& spec,
                               int min_bit) {
  (void)g;
  (void)spec;
  if (min_bit < 2) throw SearchError("min_bit must be >= 2");
  SearchSpace space;
  for (const auto& [k, candidates] : t.edge_dtypes) {
    BitRange r;
    r.edge_index = k;
    r.lo = min_bit;
    r.hi = 0;
    for (DType d : candidates) r.hi = std::max(r.hi, max_bits(d));
    if (r.lo > r.hi) {
      throw SearchError("edge " + std::to_string(k) + ": min_bit " + std::to_string(min_bit) +
                        " exceeds the widest candidate dtype (" + std::to_string(r.hi) + " bits)");
    }
    space.ranges.push_back(r);
  }
  return space;
}

boost::multiprecision::cpp_int space_size(const SearchSpace& space) {
  boost::multiprecision::cpp_int size = 1;
  for (const BitRange& r : space.ranges) size *= (r.hi - r.lo + 1);
  return size;
}

SearchResult greedy_search(const SearchSpace& space, const LossFn& eval, int rounds,
                           double tol) {
  if (rounds < 1) throw SearchError("rounds must be >= 1");
  SearchResult result;
  result.trace.header = {{"method", "greedy"},
                         {"rounds", rounds},
                         {"tol", tol},
                         {"acceptance", tol == 0.0 ? "strict" : "tolerant"}};
  Candidate cur = space.all_hi();
  int64_t iter = 0;
  double best_loss = eval(cur);
  ++result.evaluations;
  result.trace.records.push_back({iter++, cur, best_loss, true});

  for (int round = 0; round < rounds; ++round) {
    for (size_t slot = 0; slot < space.ranges.size(); ++slot) {
      while (cur[slot] > space.ranges[slot].lo) {
        Candidate probe = cur;
        probe[slot] -= 1;
        double loss = eval(probe);
        ++result.evaluations;
        bool accepted = loss < best_loss + tol;
        result.trace.records.push_back({iter++, probe, loss, accepted});
        if (!accepted) break;
        cur = std::move(probe);
        best_loss = loss;
      }
    }
  }
  result.best = cur;
  result.best_loss = best_loss;
  return result;
}

SearchResult anneal_search(const SearchSpace& space, const LossFn& eval, int steps,
                           double t0, double decay, uint64_t seed) {
  if (steps < 1) throw SearchError("steps must be >= 1");
  if (!(t0 > 0.0)) throw SearchError("t0 must be positive");
  if (!(decay > 0.0) || decay > 1.0) throw SearchError("decay must be in (0, 1]");
  SearchResult result;
  result.trace.header = {{"method", "anneal"}, {"steps", steps},  {"t0", t0},
                         {"decay", decay},     {"seed", seed},    {"start", "all_hi"},
                         {"move", "single-edge +-1"}};
  Rng rng(seed);
  Candidate cur = space.all_hi();
  double cur_loss = eval(cur);
  ++result.evaluations;
  result.best = cur;
  result.best_loss = cur_loss;
  result.trace.records.push_back({0, cur, cur_loss, true});

  double temperature = t0;
  for (int step = 1; step <= steps; ++step) {
    Candidate probe = cur;
    if (!space.ranges.empty()) {
      size_t slot = rng.index(space.ranges.size());
      int delta = (rng.next() & 1) ? 1 : -1;
      probe[slot] = std::clamp(probe[slot] + delta, space.ranges[slot].lo, space.ranges[slot].hi);
    }
    double loss = eval(probe);
    ++result.evaluations;
    bool accepted;
    if (loss <= cur_loss) {
      accepted = true;  // E_new >= E_old
    } else {
      double p = std::exp(-(loss - cur_loss) / temperature);
      accepted = rng.unit() < p;
    }
    result.trace.records.push_back({step, probe, loss, accepted});
    if (accepted) {
      cur = std::move(probe);
      cur_loss = loss;
      if (cur_loss < result.best_loss) {
        result.best = cur;
        result.best_loss = cur_loss;
      }
    }
    temperature *= decay;
  }
  return result;
}

SearchResult random_search(const SearchSpace& space, const LossFn& eval, int n, uint64_t seed) {
  if (n < 1) throw SearchError("n must be >= 1");
  SearchResult result;
  result.trace.header = {{"method", "random"}, {"n", n}, {"seed", seed}};
  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    Candidate c;
    c.reserve(space.ranges.size());
    for (const BitRange& r : space.ranges) {
      c.push_back(r.lo + static_cast<int>(rng.index(static_cast<size_t>(r.hi - r.lo + 1))));
    }
    double loss = eval(c);
    ++result.evaluations;
    bool is_best = result.trace.records.empty() || loss < result.best_loss;
    result.trace.records.push_back({i, c, loss, is_best});
    if (is_best) {
      result.best = std::move(c);
      result.best_loss = loss;
    }
  }
  return result;
}

SearchResult exhaustive_search(const SearchSpace& space, const LossFn& eval, int64_t cap) {
  if (space_size(space) > cap) {
    throw SearchError("search space larger than the exhaustive cap of " + std::to_string(cap));
  }
  SearchResult result;
  result.trace.header = {{"method", "exhaustive"}, {"cap", cap}};
  Candidate c = space.all_lo();
  int64_t iter = 0;
  bool done = false;
  while (!done) {
    double loss = eval(c);
    ++result.evaluations;
    bool is_best = result.trace.records.empty() || loss < result.best_loss;
    result.trace.records.push_back({iter++, c, loss, is_best});
    if (is_best) {
      result.best = c;
      result.best_loss = loss;
    }
    // Lexicographic successor: bump the last slot, carrying leftward.
    done = true;
    for (size_t slot = space.ranges.size(); slot-- > 0;) {
      if (c[slot] < space.ranges[slot].hi) {
        c[slot] += 1;
        done = false;
        break;
      }
      c[slot] = space.ranges[slot].lo;
    }
    if (space.ranges.empty()) done = true;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Candidate evaluation against a simulated graph.

struct CandidateEvaluator::SqInfo {
  NodeId node_id = -1;
  int edge_index = -1;
  bool boundary = false;
  int slot = -1;  // searchable edges: index into space_.ranges
  int sign = 1;
  NodeId consumer = -1;
  int consumer_port = 0;
  // Producer accumulator context.
  NodeId producer = -1;
  OpKind producer_op = OpKind::kInput;
  bool producer_accumulates = false;
  std::vector<int> producer_input_slots;  // slots of the producer's data-input edges
};

namespace {

struct ConsumerGroup {
  OpKind op = OpKind::kInput;
  std::vector<int> input_slots;  // slot per data port
  std::vector<int> input_signs;
};

}  // namespace

CandidateEvaluator::~CandidateEvaluator() = default;

CandidateEvaluator::CandidateEvaluator(const Graph& sim_g, const HardwareSpec& spec,
                                       const Topology& topology,
                                       const std::map<int, double>& thresholds,
                                       const CalibrationStats& stats, const Dataset& calib,
                                       int min_bit, int workers)
    : sim_g_(sim_g), spec_(spec), calib_(calib), thresholds_(thresholds), workers_(workers) {
  space_ = build_search_space(sim_g, topology, spec, min_bit);
  for (size_t i = 0; i < space_.ranges.size(); ++i) {
    edge_to_slot_[space_.ranges[i].edge_index] = i;
  }
  for (const auto& [k, e] : stats.per_edge) {
    edge_minmax_[k] = {e.min, e.max};
  }

  // Index the simulated_quantize nodes and their surroundings.
  std::map<NodeId, size_t> sq_of_node;
  for (NodeId id : traversal_order(sim_g_)) {
    const Node& n = sim_g_.node(id);
    if (n.op != OpKind::kSimulatedQuantize) continue;
    SqInfo info;
    info.node_id = id;
    info.edge_index = n.attr<int>("edge_index");
    info.boundary = n.attr_or<bool>("boundary", false);
    if (!info.boundary) {
      auto it = edge_to_slot_.find(info.edge_index);
      if (it == edge_to_slot_.end()) {
        throw SearchError("simulated edge " + std::to_string(info.edge_index) +
                          " missing from the search space");
      }
      info.slot = static_cast<int>(it->second);
      if (!thresholds_.count(info.edge_index)) {
        throw SearchError("no threshold for edge " + std::to_string(info.edge_index));
      }
      const auto& candidates = topology.edge_dtypes.at(info.edge_index);
      bool all_unsigned = !candidates.empty() &&
                          std::all_of(candidates.begin(), candidates.end(),
                                      [](DType d) { return !d.is_signed(); });
      info.sign = all_unsigned ? 0 : 1;
    }
    auto in_edges = sim_g_.in_edges(id);
    info.producer = in_edges[0]->src.node;
    const Node& producer = sim_g_.node(info.producer);
    info.producer_op = producer.op;
    info.producer_accumulates =
        op_info(producer.op).is_arithmetic && topology.is_quantized(info.producer);
    auto outs = sim_g_.out_edges(id);
    if (!outs.empty()) {
      info.consumer = outs[0]->dst.node;
      info.consumer_port = outs[0]->dst.port;
    }
    sq_of_node[id] = sq_nodes_.size();
    sq_nodes_.push_back(info);
  }

  // Wire producer data inputs (which are sq nodes themselves) to slots.
  for (SqInfo& info : sq_nodes_) {
    if (!info.producer_accumulates) continue;
    const OpInfo& pinfo = op_info(info.producer_op);
    auto edges = sim_g_.in_edges(info.producer);
    for (int p = 0; p < pinfo.data_arity; ++p) {
      NodeId feeder = edges[static_cast<size_t>(p)]->src.node;
      auto it = sq_of_node.find(feeder);
      if (it == sq_of_node.end()) {
        throw SearchError("quantized producer " + std::to_string(info.producer) +
                          " has a non-simulated data input");
      }
      info.producer_input_slots.push_back(sq_nodes_[it->second].slot);
    }
  }

  refs_ = predict_top1(sim_g_, calib_, workers_);
}

SimBinding CandidateEvaluator::bind(const Candidate& c) const {
  if (!space_.contains(c)) throw SearchError("candidate is outside the search space");

  // Per-consumer signature matching decides storage dtypes.
  std::map<NodeId, ConsumerGroup> groups;
  for (const SqInfo& info : sq_nodes_) {
    if (info.boundary || info.consumer < 0) continue;
    ConsumerGroup& grp = groups[info.consumer];
    grp.op = sim_g_.node(info.consumer).op;
    size_t port = static_cast<size_t>(info.consumer_port);
    if (grp.input_slots.size() <= port) {
      grp.input_slots.resize(port + 1, -1);
      grp.input_signs.resize(port + 1, 1);
    }
    grp.input_slots[port] = info.slot;
    grp.input_signs[port] = info.sign;
  }
  std::map<NodeId, const Signature*> matched;
  for (auto& [node, grp] : groups) {
    std::vector<int> bits;
    std::vector<int> signs;
    for (size_t p = 0; p < grp.input_slots.size(); ++p) {
      if (grp.input_slots[p] < 0) {
        throw SearchError("consumer " + std::to_string(node) + " missing simulated input");
      }
      bits.push_back(c[static_cast<size_t>(grp.input_slots[p])]);
      signs.push_back(grp.input_signs[p]);
    }
    auto sigs = spec_.signatures(grp.op);
    const Signature* sig = match_signature(sigs, bits, signs);
    if (!sig) {
      throw SearchError("no hardware signature of " + op_name(grp.op) + " (node " +
                        std::to_string(node) + ") can hold the candidate bits");
    }
    matched[node] = sig;
  }

  auto scale_of = [&](const SqInfo& info) {
    int bit = c[static_cast<size_t>(info.slot)];
    double threshold = edge_threshold(info);
    return compute_scale(threshold, bit, info.sign);
  };

  SimBinding binding;
  for (const SqInfo& info : sq_nodes_) {
    QParams p;
    if (info.boundary) {
      p = noop_params();
    } else {
      int bit = c[static_cast<size_t>(info.slot)];
      p.threshold = edge_threshold(info);
      p.bit = bit;
      p.sign = info.sign;
      p.passthrough = false;
      const Signature* sig = matched.at(info.consumer);
      DType storage = sig->in_dtypes[static_cast<size_t>(info.consumer_port)];
      p.in_dtype = storage;
      p.out_dtype = storage;
      if (info.sign == 0) {
        auto mm = edge_minmax_.find(info.edge_index);
        double lo = mm != edge_minmax_.end() ? mm->second.first : 0.0;
        p.zero_point = asymmetric_zero_point(lo, p.threshold, bit);
      }
    }
    if (info.producer_accumulates) {
      // Accumulator of the producing arithmetic op: dtype from its matched
      // signature, interpretation scale from its bound input scales.
      auto sig_it = matched.find(info.producer);
      if (sig_it != matched.end()) {
        p.acc_dtype = sig_it->second->out_dtype;
        const SqInfo& in0 = *find_sq_by_slot(info.producer_input_slots[0]);
        if (op_info(info.producer_op).is_mac) {
          const SqInfo& in1 = *find_sq_by_slot(info.producer_input_slots[1]);
          p.acc_scale = scale_of(in0) * scale_of(in1);
        } else {
          const SqInfo& in1 = *find_sq_by_slot(info.producer_input_slots[1]);
          double t0 = edge_threshold(in0);
          double t1 = edge_threshold(in1);
          p.acc_scale = t0 >= t1 ? scale_of(in0) : scale_of(in1);
        }
      }
    }
    binding[info.node_id] = p;
  }
  return binding;
}

double CandidateEvaluator::edge_threshold(const SqInfo& info) const {
  if (info.sign == 0) {
    auto mm = edge_minmax_.find(info.edge_index);
    if (mm != edge_minmax_.end()) {
      double range = mm->second.second - mm->second.first;
      return range > 0.0 ? range : kDegenerateThreshold;
    }
  }
  return thresholds_.at(info.edge_index);
}

const CandidateEvaluator::SqInfo* CandidateEvaluator::find_sq_by_slot(int slot) const {
  for (const SqInfo& info : sq_nodes_) {
    if (info.slot == slot) return &info;
  }
  throw SearchError("no simulated edge for slot " + std::to_string(slot));
}

double CandidateEvaluator::loss(const Candidate& c) const {
  SimBinding binding = bind(c);
  std::vector<int64_t> preds = predict_top1(sim_g_, calib_, workers_, &binding);
  int64_t same = 0;
  for (size_t i = 0; i < preds.size(); ++i) same += (preds[i] == refs_[i]) ? 1 : 0;
  evaluations_.fetch_add(1, std::memory_order_relaxed);
  return 1.0 - static_cast<double>(same) / static_cast<double>(preds.size());
}

std::vector<double> CandidateEvaluator::losses(std::span<const Candidate> candidates) const {
  std::vector<double> result(candidates.size(), 0.0);
  std::vector<std::string> errors(candidates.size());
  for (size_t i = 0; i < candidates.size(); ++i) {
    try {
      result[i] = loss(candidates[i]);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i].empty()) {
      throw SearchError("candidate " + std::to_string(i) + ": " + errors[i]);
    }
  }
  return result;
}

Strategy CandidateEvaluator::strategy_for(const Candidate& c) const {
  SimBinding binding = bind(c);
  Strategy strategy;
  for (const SqInfo& info : sq_nodes_) {
    if (info.boundary) continue;
    const QParams& p = binding.at(info.node_id);
    EdgeDecision d;
    d.bit = p.bit;
    d.threshold = p.threshold;
    d.sign = p.sign;
    d.zero_point = p.zero_point;
    d.storage_dtype = p.in_dtype;
    strategy.edges[info.edge_index] = d;
  }
  return strategy;
}

double evaluate_candidate(const Graph& sim_g, const HardwareSpec& spec, const Topology& topology,
                          const Candidate& c, const std::map<int, double>& thresholds,
                          const CalibrationStats& stats, const Dataset& calib, int min_bit,
                          int workers) {
  CandidateEvaluator evaluator(sim_g, spec, topology, thresholds, stats, calib, min_bit, workers);
  return evaluator.loss(c);
}

std::vector<double> batched_evaluate(const Graph& sim_g, const HardwareSpec& spec,
                                     const Topology& topology,
                                     std::span<const Candidate> candidates,
                                     const std::map<int, double>& thresholds,
                                     const CalibrationStats& stats, const Dataset& calib,
                                     int min_bit, int workers) {
  CandidateEvaluator evaluator(sim_g, spec, topology, thresholds, stats, calib, min_bit, workers);
  return evaluator.losses(candidates);
}

}  // namespace quantc
