#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "grank/error.hpp"
#include "grank/estimate.hpp"
#include "grank/exact.hpp"
#include "grank/graph.hpp"

namespace grank {

inline constexpr double kDefaultSlope = 13.0;

// Four-parameter logistic model of reverse closeness rank. The asymptotes are
// fixed at 1 and n; c_mid and the slope p are the free parameters.
struct SigmoidParams {
  double n = 2.0;
  double c_mid = 1.0;
  double p = kDefaultSlope;
  double c_max_est = 1.0;
  double c_min_est = 1.0;
  NodeId central = 0;
  NodeId farthest = 0;
};

// Highest-degree node; ties go to the smallest id.
inline NodeId find_central_candidate(const Graph& g) {
  if (g.num_nodes() == 0) throw ParameterError("graph has no nodes");
  NodeId best = 0;
  for (NodeId u = 1; u < g.num_nodes(); ++u) {
    if (g.degree(u) > g.degree(best)) best = u;
  }
  return best;
}

struct Extremes {
  double c_max_est = 0.0;
  double c_min_est = 0.0;
  NodeId central = 0;
  NodeId farthest = 0;
};

// Two BFS traversals: one from the central candidate (its closeness and the
// node farthest from it), one from that farthest node.
inline Extremes estimate_extremes(const Graph& g) {
  if (g.num_nodes() < 2) throw DomainError("closeness estimation needs n >= 2");
  Extremes x;
  x.central = find_central_candidate(g);
  auto dist = bfs_distances(g, x.central);
  x.c_max_est = detail::closeness_from_distances(g, x.central, dist);
  std::uint32_t far = 0;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (dist[v] > far) {
      far = dist[v];
      x.farthest = v;
    }
  }
  x.c_min_est = closeness_centrality(g, x.farthest);
  return x;
}

inline double estimate_c_mid(double c_max_est, double c_min_est) {
  return (c_max_est + c_min_est) / 2.0;
}

inline SigmoidParams fit_sigmoid(const Graph& g, double slope = kDefaultSlope) {
  if (!(slope > 0.0)) throw ParameterError("logistic slope must be positive");
  const Extremes x = estimate_extremes(g);
  SigmoidParams p;
  p.n = static_cast<double>(g.num_nodes());
  p.c_max_est = x.c_max_est;
  p.c_min_est = std::min(x.c_min_est, x.c_max_est);
  p.c_mid = estimate_c_mid(x.c_max_est, p.c_min_est);
  p.p = slope;
  p.central = x.central;
  p.farthest = x.farthest;
  return p;
}

// n + (1 - n) / (1 + (c_u / c_mid)^p)
inline double reverse_rank(double c_u, const SigmoidParams& p) {
  if (!(c_u > 0.0)) throw DomainError("closeness must be positive, got " + std::to_string(c_u));
  return p.n + (1.0 - p.n) / (1.0 + std::pow(c_u / p.c_mid, p.p));
}

inline double actual_rank_from_reverse(double rev, double n) {
  return clamp_rank(n - rev + 1.0, n);
}

// One BFS: closeness of u, then the logistic mapping.
inline RankEstimate estimate_closeness_rank(const SigmoidParams& p, const Graph& g, NodeId u) {
  RankEstimate r;
  r.node = u;
  r.method = Method::kClosenessSigmoid;
  r.value = actual_rank_from_reverse(reverse_rank(closeness_centrality(g, u), p), p.n);
  return r;
}

// Three BFS traversals in total. `g` must be connected (pass the LCC).
inline RankEstimate estimate_closeness_rank(const Graph& g, NodeId u,
                                            double slope = kDefaultSlope) {
  return estimate_closeness_rank(fit_sigmoid(g, slope), g, u);
}

}  // namespace grank
