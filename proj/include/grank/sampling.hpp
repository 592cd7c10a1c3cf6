#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "grank/error.hpp"
#include "grank/estimate.hpp"
#include "grank/graph.hpp"

namespace grank {

using Rng = std::mt19937_64;

struct AccessCounts {
  std::uint64_t degree = 0;
  std::uint64_t neighbors = 0;
  std::uint64_t random_neighbor = 0;
  std::uint64_t random_node = 0;
  std::uint64_t node_count = 0;
};

// Crawler view of a graph: only what a node exposes about itself and its
// neighbours. Nothing here reveals n, m or the id universe.
//
// Counters are atomic so one access object can be shared by concurrent
// walkers.
class LocalAccess {
 public:
  explicit LocalAccess(const Graph& g) : graph_(&g) {}
  LocalAccess(const LocalAccess&) = delete;
  LocalAccess& operator=(const LocalAccess&) = delete;

  std::size_t degree(NodeId u) const {
    degree_.fetch_add(1, std::memory_order_relaxed);
    return graph_->degree(u);
  }

  std::span<const NodeId> neighbors(NodeId u) const {
    neighbors_.fetch_add(1, std::memory_order_relaxed);
    return graph_->neighbors(u);
  }

  NodeId random_neighbor(NodeId u, Rng& rng) const {
    random_neighbor_.fetch_add(1, std::memory_order_relaxed);
    auto nb = graph_->neighbors(u);
    if (nb.empty()) throw DomainError("node " + graph_->label(u) + " has no neighbours");
    std::uniform_int_distribution<std::size_t> pick(0, nb.size() - 1);
    return nb[pick(rng)];
  }

  AccessCounts counts() const {
    AccessCounts c;
    c.degree = degree_.load();
    c.neighbors = neighbors_.load();
    c.random_neighbor = random_neighbor_.load();
    c.random_node = random_node_.load();
    c.node_count = node_count_.load();
    return c;
  }

 protected:
  const Graph* graph_;
  mutable std::atomic<std::uint64_t> degree_{0};
  mutable std::atomic<std::uint64_t> neighbors_{0};
  mutable std::atomic<std::uint64_t> random_neighbor_{0};
  mutable std::atomic<std::uint64_t> random_node_{0};
  mutable std::atomic<std::uint64_t> node_count_{0};
};

// Adds the two capabilities uniform sampling needs.
class GlobalAccess : public LocalAccess {
 public:
  using LocalAccess::LocalAccess;

  NodeId random_node(Rng& rng) const {
    random_node_.fetch_add(1, std::memory_order_relaxed);
    std::uniform_int_distribution<NodeId> pick(0, graph_->num_nodes() - 1);
    return pick(rng);
  }

  NodeId node_count() const {
    node_count_.fetch_add(1, std::memory_order_relaxed);
    return graph_->num_nodes();
  }
};

enum class SampleKind { kUniform, kMetropolisHastings, kRandomWalk, kReweighted };

inline const char* to_string(SampleKind k) {
  switch (k) {
    case SampleKind::kUniform: return "US";
    case SampleKind::kMetropolisHastings: return "MH";
    case SampleKind::kRandomWalk: return "RW";
    case SampleKind::kReweighted: return "RW-reweighted";
  }
  return "?";
}

struct SampleEntry {
  NodeId node = 0;
  std::size_t degree = 0;
};

// Collected nodes with multiplicity, in collection order.
struct Sample {
  std::vector<SampleEntry> entries;
  SampleKind kind = SampleKind::kUniform;
  std::size_t burn_in = 0;
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return entries.size(); }
};

// s = ceil(frac * n), at least 1.
inline std::size_t sample_size(double frac, double n) {
  if (!(frac > 0.0 && frac <= 1.0)) {
    throw ParameterError("sample fraction must lie in (0, 1], got " + std::to_string(frac));
  }
  const double s = std::ceil(frac * n - 1e-9);
  return static_cast<std::size_t>(std::max(1.0, s));
}

// s distinct nodes, uniformly without replacement.
inline Sample sample_uniform(const GlobalAccess& access, std::size_t s, Rng& rng) {
  const NodeId n = access.node_count();
  if (s < 1 || s > n) {
    throw ParameterError("uniform sample size " + std::to_string(s) + " outside [1, " +
                         std::to_string(n) + "]");
  }
  Sample out;
  out.kind = SampleKind::kUniform;
  out.entries.reserve(s);
  std::vector<bool> taken(n, false);
  while (out.entries.size() < s) {
    const NodeId v = access.random_node(rng);
    if (taken[v]) continue;
    taken[v] = true;
    out.entries.push_back({v, access.degree(v)});
  }
  return out;
}

// 1 + number of entries with strictly larger degree, ignoring entries of u.
inline std::uint64_t local_rank(const Sample& sample, NodeId u, std::size_t d_u) {
  std::uint64_t greater = 0;
  for (const auto& e : sample.entries) {
    if (e.node != u && e.degree > d_u) ++greater;
  }
  return greater + 1;
}

// Answers local_rank for many query nodes against one sample.
class SampleIndex {
 public:
  explicit SampleIndex(const Sample& sample) : size_(sample.size()) {
    degrees_.reserve(sample.size());
    for (const auto& e : sample.entries) {
      degrees_.push_back(e.degree);
      auto& slot = self_[e.node];
      ++slot.first;
      slot.second = e.degree;
    }
    std::sort(degrees_.begin(), degrees_.end());
  }

  std::uint64_t local_rank(NodeId u, std::size_t d_u) const {
    auto greater = static_cast<std::uint64_t>(
        degrees_.end() - std::upper_bound(degrees_.begin(), degrees_.end(), d_u));
    if (auto it = self_.find(u); it != self_.end() && it->second.second > d_u) {
      greater -= it->second.first;
    }
    return greater + 1;
  }

  std::size_t size() const noexcept { return size_; }

 private:
  std::size_t size_;
  std::vector<std::size_t> degrees_;
  std::unordered_map<NodeId, std::pair<std::uint64_t, std::size_t>> self_;
};

// (n / s) * r_local, clamped to [1, n].
inline double extrapolate(double r_local, double n, std::size_t s) {
  if (s == 0) throw ParameterError("cannot extrapolate from an empty sample");
  return clamp_rank(n / static_cast<double>(s) * r_local, n);
}

// Explicit Metropolis-Hastings kernel row for u: (target, probability)
// pairs, neighbours ascending, then the self-loop entry.
inline std::vector<std::pair<NodeId, double>> mh_transition(const Graph& g, NodeId u) {
  std::vector<std::pair<NodeId, double>> row;
  const double du = static_cast<double>(g.degree(u));
  double moving = 0.0;
  for (NodeId v : g.neighbors(u)) {
    const double p = 1.0 / du * std::min(1.0, du / static_cast<double>(g.degree(v)));
    row.emplace_back(v, p);
    moving += p;
  }
  row.emplace_back(u, 1.0 - moving);
  return row;
}

// One MH step: propose a uniform neighbour, accept with min(1, d_u / d_v).
inline NodeId mh_step(const LocalAccess& access, NodeId u, Rng& rng) {
  const NodeId v = access.random_neighbor(u, rng);
  const std::size_t du = access.degree(u);
  const std::size_t dv = access.degree(v);
  if (dv <= du) return v;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  return unit(rng) < static_cast<double>(du) / static_cast<double>(dv) ? v : u;
}

namespace detail {

template <class Step>
Sample walk(const LocalAccess& access, NodeId start, std::size_t s, std::size_t burn_in,
            SampleKind kind, Step step) {
  if (access.degree(start) == 0) {
    throw DomainError("walk start node " + std::to_string(start) + " is isolated");
  }
  Sample out;
  out.kind = kind;
  out.burn_in = burn_in;
  out.entries.reserve(s);
  NodeId cur = start;
  for (std::size_t i = 0; i < burn_in; ++i) cur = step(cur);
  for (std::size_t i = 0; i < s; ++i) {
    if (i > 0) cur = step(cur);
    out.entries.push_back({cur, access.degree(cur)});
  }
  return out;
}

}  // namespace detail

// Uniformly random non-isolated node. Needs the whole graph, so only for
// evaluation runs where a true crawler would be handed a seed node instead.
inline NodeId random_walk_start(const Graph& g, Rng& rng) {
  if (g.num_nodes() == 0) throw DomainError("graph has no nodes");
  std::uniform_int_distribution<NodeId> pick(0, g.num_nodes() - 1);
  for (int tries = 0; tries < 1 << 20; ++tries) {
    const NodeId v = pick(rng);
    if (g.degree(v) > 0) return v;
  }
  throw DomainError("no node with a neighbour to start a walk from");
}

// Records the current node at every post-burn-in step, self-loops included.
inline Sample mh_walk(const LocalAccess& access, NodeId start, std::size_t s,
                      std::size_t burn_in, Rng& rng) {
  return detail::walk(access, start, s, burn_in, SampleKind::kMetropolisHastings,
                      [&](NodeId u) { return mh_step(access, u, rng); });
}

// Simple random walk; stationary probability proportional to degree.
inline Sample rw_walk(const LocalAccess& access, NodeId start, std::size_t s,
                      std::size_t burn_in, Rng& rng) {
  return detail::walk(access, start, s, burn_in, SampleKind::kRandomWalk,
                      [&](NodeId u) { return access.random_neighbor(u, rng); });
}

// Resamples s_out entries with replacement, P(entry) proportional to 1/degree.
inline Sample reweight(const Sample& sample, std::size_t s_out, Rng& rng) {
  if (sample.entries.empty()) throw ParameterError("cannot reweight an empty sample");
  std::vector<double> weights;
  weights.reserve(sample.size());
  for (const auto& e : sample.entries) {
    if (e.degree == 0) throw DomainError("cannot reweight an entry of degree 0");
    weights.push_back(1.0 / static_cast<double>(e.degree));
  }
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  Sample out;
  out.kind = SampleKind::kReweighted;
  out.burn_in = sample.burn_in;
  out.seed = sample.seed;
  out.entries.reserve(s_out);
  for (std::size_t i = 0; i < s_out; ++i) out.entries.push_back(sample.entries[pick(rng)]);
  return out;
}

struct SamplingOptions {
  double sample_frac = 0.01;
  std::size_t burn_in = 100;
  std::uint64_t seed = 0;
};

namespace detail {

inline RankEstimate finish(const Sample& sample, const LocalAccess& access, NodeId u, double n,
                           Method method, const SamplingOptions& opt) {
  RankEstimate r;
  r.node = u;
  r.method = method;
  r.sample_frac = opt.sample_frac;
  r.seed = opt.seed;
  r.value = extrapolate(static_cast<double>(local_rank(sample, u, access.degree(u))), n,
                        sample.size());
  return r;
}

}  // namespace detail

inline RankEstimate estimate_degree_rank_us(const GlobalAccess& access, NodeId u,
                                            const SamplingOptions& opt) {
  Rng rng(opt.seed);
  const double n = access.node_count();
  Sample sample = sample_uniform(access, sample_size(opt.sample_frac, n), rng);
  sample.seed = opt.seed;
  return detail::finish(sample, access, u, n, Method::kUniform, opt);
}

// `n` is the network size from a ParameterSource; the walk never asks the
// graph for it.
inline RankEstimate estimate_degree_rank_mh(const LocalAccess& access, NodeId u, NodeId start,
                                            double n, const SamplingOptions& opt) {
  Rng rng(opt.seed);
  Sample sample = mh_walk(access, start, sample_size(opt.sample_frac, n), opt.burn_in, rng);
  sample.seed = opt.seed;
  return detail::finish(sample, access, u, n, Method::kMetropolisHastings, opt);
}

inline RankEstimate estimate_degree_rank_rw(const LocalAccess& access, NodeId u, NodeId start,
                                            double n, const SamplingOptions& opt) {
  Rng rng(opt.seed);
  const std::size_t s = sample_size(opt.sample_frac, n);
  Sample walked = rw_walk(access, start, s, opt.burn_in, rng);
  Sample sample = reweight(walked, s, rng);
  sample.seed = opt.seed;
  return detail::finish(sample, access, u, n, Method::kRandomWalk, opt);
}

}  // namespace grank
