#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "grank/error.hpp"
#include "grank/estimate.hpp"
#include "grank/graph.hpp"

namespace grank {

// Network-level inputs to the closed forms. In a crawl setting these come
// from an external size/degree estimator rather than from the full graph.
struct NetworkParams {
  double n = 0.0;
  double d_min = 0.0;
  double d_max = 0.0;
  double d_avg = 0.0;
};

// Ground truth from the graph, with any supplied field taking precedence.
class ParameterSource {
 public:
  std::optional<double> n, d_min, d_max, d_avg;

  static ParameterSource ground_truth() { return {}; }
  static ParameterSource provided(const NetworkParams& p) {
    ParameterSource s;
    s.n = p.n;
    s.d_min = p.d_min;
    s.d_max = p.d_max;
    s.d_avg = p.d_avg;
    return s;
  }

  bool is_ground_truth() const { return !n && !d_min && !d_max && !d_avg; }

  NetworkParams resolve(const Graph& g) const {
    NetworkParams p;
    const bool need_stats = !d_min || !d_max || !d_avg;
    DegreeStats stats;
    if (need_stats) stats = degree_stats(g);
    p.n = n.value_or(static_cast<double>(g.num_nodes()));
    p.d_min = d_min.value_or(static_cast<double>(stats.d_min));
    p.d_max = d_max.value_or(static_cast<double>(stats.d_max));
    p.d_avg = d_avg.value_or(stats.d_avg);
    return p;
  }
};

struct PowerLawParams {
  double gamma = 0.0;
  double c = 0.0;
  double d_min = 0.0;
  double d_max = 0.0;
  double n = 0.0;
};

// gamma ~= 2 + d_min / (d_avg - d_min)
inline double estimate_gamma(double d_min, double d_avg) {
  if (!(d_avg > d_min)) {
    throw DegenerateDistributionError(
        "power-law exponent undefined: average degree " + std::to_string(d_avg) +
        " does not exceed minimum degree " + std::to_string(d_min));
  }
  return 2.0 + d_min / (d_avg - d_min);
}

inline double estimate_gamma(const DegreeStats& s) {
  return estimate_gamma(static_cast<double>(s.d_min), s.d_avg);
}

// Normalisation constant of c * j^-gamma over [d_min, d_max].
inline double estimate_c(double gamma, double d_min, double d_max) {
  if (gamma == 1.0) throw ParameterError("power-law normalisation undefined for gamma = 1");
  if (!(d_min >= 1.0)) throw ParameterError("power-law model needs d_min >= 1");
  if (!(d_max > d_min)) {
    throw DegenerateDistributionError("power-law normalisation undefined: d_max == d_min");
  }
  const double e = 1.0 - gamma;
  return e / (std::pow(d_max, e) - std::pow(d_min, e));
}

inline PowerLawParams fit_power_law(const NetworkParams& p) {
  PowerLawParams out;
  out.gamma = estimate_gamma(p.d_min, p.d_avg);
  out.c = estimate_c(out.gamma, p.d_min, p.d_max);
  out.d_min = p.d_min;
  out.d_max = p.d_max;
  out.n = p.n;
  return out;
}

// n_j = n * c * j^-gamma. Continuous density, so low-degree values can exceed
// the true bin count.
inline double expected_degree_count(const PowerLawParams& p, double j) {
  if (j < p.d_min || j > p.d_max) {
    throw DomainError("degree " + std::to_string(j) + " outside [" + std::to_string(p.d_min) +
                      ", " + std::to_string(p.d_max) + "]");
  }
  return p.n * p.c * std::pow(j, -p.gamma);
}

// Unclamped closed-form expectation of the degree rank.
inline double expected_degree_rank_raw(const PowerLawParams& p, double d_u) {
  const double e = 1.0 - p.gamma;
  const double top = std::pow(p.d_max, e);
  return p.n * (top - std::pow(d_u + 1.0, e)) / (top - std::pow(p.d_min, e)) + 1.0;
}

inline RankEstimate estimate_degree_rank_pl(const PowerLawParams& p, double d_u,
                                            NodeId node = 0) {
  const double d = std::clamp(d_u, p.d_min, p.d_max);
  RankEstimate r;
  r.node = node;
  r.method = Method::kPowerLaw;
  r.value = clamp_rank(expected_degree_rank_raw(p, d), p.n);
  return r;
}

}  // namespace grank
