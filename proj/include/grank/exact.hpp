#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "grank/error.hpp"
#include "grank/graph.hpp"

namespace grank {

enum class Metric { kDegree, kCloseness };

inline const char* to_string(Metric m) {
  return m == Metric::kDegree ? "degree" : "closeness";
}

struct CentralityVector {
  Metric metric = Metric::kDegree;
  std::vector<double> values;
};

struct ExactRank {
  NodeId node = 0;
  std::uint64_t rank = 1;
};

namespace detail {
inline std::atomic<std::uint64_t> bfs_traversals{0};
}  // namespace detail

// Total single-source BFS traversals run by this process. Callers take a
// before/after difference.
inline std::uint64_t bfs_count() noexcept {
  return detail::bfs_traversals.load(std::memory_order_relaxed);
}

inline constexpr std::uint32_t kUnreached = 0xffffffffu;

// Unit-weight hop distances from `source`; kUnreached for other components.
inline std::vector<std::uint32_t> bfs_distances(const Graph& g, NodeId source) {
  detail::bfs_traversals.fetch_add(1, std::memory_order_relaxed);
  std::vector<std::uint32_t> dist(g.num_nodes(), kUnreached);
  std::vector<NodeId> queue;
  queue.reserve(g.num_nodes());
  dist[source] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId u = queue[head];
    for (NodeId v : g.neighbors(u)) {
      if (dist[v] == kUnreached) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

inline double degree_centrality(const Graph& g, NodeId u) {
  if (g.num_nodes() < 2) throw DomainError("degree centrality needs n >= 2");
  return static_cast<double>(g.degree(u)) / (g.num_nodes() - 1);
}

inline CentralityVector all_degree(const Graph& g) {
  if (g.num_nodes() < 2) throw DomainError("degree centrality needs n >= 2");
  CentralityVector out{Metric::kDegree, std::vector<double>(g.num_nodes())};
  for (NodeId u = 0; u < g.num_nodes(); ++u) out.values[u] = degree_centrality(g, u);
  return out;
}

namespace detail {

inline double closeness_from_distances(const Graph& g, NodeId u,
                                       const std::vector<std::uint32_t>& dist) {
  std::uint64_t farness = 0;
  NodeId reached = 0;
  for (std::uint32_t d : dist) {
    if (d != kUnreached) {
      farness += d;
      ++reached;
    }
  }
  if (reached != g.num_nodes()) {
    throw DisconnectedGraphError(
        "closeness undefined on a disconnected graph: node " + g.label(u) +
        " lies in a component of " + std::to_string(reached) + " of " +
        std::to_string(g.num_nodes()) + " nodes; restrict to the largest connected component");
  }
  return static_cast<double>(g.num_nodes() - 1) / static_cast<double>(farness);
}

}  // namespace detail

// (n - 1) / farness. Exactly one BFS.
inline double closeness_centrality(const Graph& g, NodeId u) {
  if (g.num_nodes() < 2) throw DomainError("closeness centrality needs n >= 2");
  return detail::closeness_from_distances(g, u, bfs_distances(g, u));
}

// n BFS runs, Theta(n * m). Sources are split across `threads` workers; the
// result does not depend on the split.
inline CentralityVector all_closeness(const Graph& g, unsigned threads = 1) {
  const NodeId n = g.num_nodes();
  if (n < 2) throw DomainError("closeness centrality needs n >= 2");
  if (!is_connected(g)) {
    // Fails with the offending component in the message.
    closeness_centrality(g, 0);
  }
  CentralityVector out{Metric::kCloseness, std::vector<double>(n)};
  threads = std::max(1u, std::min<unsigned>(threads, n));
  auto work = [&](unsigned worker) {
    for (NodeId u = worker; u < n; u += threads) out.values[u] = closeness_centrality(g, u);
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }
  return out;
}

// Competition ranking: 1 + number of strictly greater values.
inline ExactRank exact_rank(const CentralityVector& c, NodeId u) {
  const double cu = c.values.at(u);
  std::uint64_t greater = 0;
  for (double v : c.values) greater += v > cu ? 1 : 0;
  return {u, greater + 1};
}

// Competition ranks for every node in O(n log n).
inline std::vector<std::uint64_t> exact_ranks(const CentralityVector& c) {
  const std::size_t n = c.values.size();
  std::vector<NodeId> order(n);
  for (NodeId i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](NodeId a, NodeId b) { return c.values[a] > c.values[b]; });
  std::vector<std::uint64_t> rank(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && c.values[order[i]] == c.values[order[i - 1]]) {
      rank[order[i]] = rank[order[i - 1]];
    } else {
      rank[order[i]] = i + 1;
    }
  }
  return rank;
}

inline ExactRank degree_rank(const Graph& g, NodeId u) {
  const std::size_t du = g.degree(u);
  std::uint64_t greater = 0;
  for (NodeId v = 0; v < g.num_nodes(); ++v) greater += g.degree(v) > du ? 1 : 0;
  return {u, greater + 1};
}

// `g` must be connected; use largest_connected_component first otherwise.
inline ExactRank closeness_rank(const Graph& g, NodeId u, unsigned threads = 1) {
  return exact_rank(all_closeness(g, threads), u);
}

}  // namespace grank
