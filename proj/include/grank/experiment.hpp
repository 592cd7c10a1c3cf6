#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "grank/closeness_sigmoid.hpp"
#include "grank/error.hpp"
#include "grank/estimate.hpp"
#include "grank/exact.hpp"
#include "grank/graph.hpp"
#include "grank/power_law.hpp"
#include "grank/sampling.hpp"

namespace grank {

struct ExperimentConfig {
  std::vector<Method> methods;
  double sample_frac = 0.01;
  std::size_t iterations = 20;
  std::uint64_t base_seed = 0;
  std::size_t burn_in = 100;
  double slope = kDefaultSlope;
  // Unset: evaluate every node. Otherwise a rank-stratified subset.
  std::optional<std::size_t> eval_count;
  ParameterSource params;
  unsigned threads = 1;
};

struct MethodStats {
  Method method = Method::kPowerLaw;
  double mean_est = 0.0;
  double mae = 0.0;
  double std = 0.0;  // population std of the absolute error over iterations
};

struct ErrorRecord {
  NodeId node = 0;
  std::string label;
  std::uint64_t actual_rank = 0;
  std::vector<MethodStats> stats;  // in config method order
};

// Degree methods and the closeness method compare against different ranks,
// so one experiment covers one metric.
inline Metric experiment_metric(const std::vector<Method>& methods) {
  if (methods.empty()) throw ParameterError("experiment needs at least one method");
  const bool degree = is_degree_method(methods.front());
  for (Method m : methods) {
    if (is_degree_method(m) != degree) {
      throw ParameterError("cannot mix degree-rank and closeness-rank methods in one experiment");
    }
  }
  return degree ? Metric::kDegree : Metric::kCloseness;
}

inline void validate(const ExperimentConfig& cfg) {
  experiment_metric(cfg.methods);
  if (!(cfg.sample_frac > 0.0 && cfg.sample_frac <= 1.0)) {
    throw ParameterError("sample fraction must lie in (0, 1]");
  }
  if (cfg.iterations < 1) throw ParameterError("iterations must be >= 1");
}

// Picks `count` nodes spanning the rank axis, always including a rank-1 node
// and a node of the largest rank. When there are at least `count` distinct
// ranks, the chosen ranks are distinct (evenly spaced over the distinct rank
// values, lowest id per rank); otherwise nodes are taken at evenly spaced
// positions of the (rank, id) order. Returned in (rank, id) order.
inline std::vector<NodeId> stratify_eval_nodes(const std::vector<std::uint64_t>& ranks,
                                               std::size_t count) {
  const std::size_t n = ranks.size();
  if (count > n) {
    throw ParameterError("cannot pick " + std::to_string(count) + " evaluation nodes from " +
                         std::to_string(n));
  }
  std::vector<NodeId> order(n);
  for (NodeId i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    return ranks[a] != ranks[b] ? ranks[a] < ranks[b] : a < b;
  });
  if (count == 0) return {};

  auto spread = [&](std::size_t total, std::size_t k) {
    // k evenly spaced indices in [0, total), first and last included.
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) {
      idx[i] = k == 1 ? 0 : static_cast<std::size_t>(std::llround(
                                static_cast<double>(i) * static_cast<double>(total - 1) /
                                static_cast<double>(k - 1)));
    }
    return idx;
  };

  // First position of each distinct rank in `order`.
  std::vector<std::size_t> firsts;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0 || ranks[order[i]] != ranks[order[i - 1]]) firsts.push_back(i);
  }
  std::vector<NodeId> out;
  out.reserve(count);
  if (firsts.size() >= count) {
    for (std::size_t i : spread(firsts.size(), count)) out.push_back(order[firsts[i]]);
  } else {
    for (std::size_t i : spread(n, count)) out.push_back(order[i]);
  }
  return out;
}

namespace detail {

inline void run_in_parallel(std::size_t tasks, unsigned threads,
                            const std::function<void(std::size_t)>& body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(tasks)));
  if (threads <= 1) {
    for (std::size_t t = 0; t < tasks; ++t) body(t);
    return;
  }
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t t = w; t < tasks; t += threads) body(t);
    });
  }
}

}  // namespace detail

// Estimates for every evaluation node over cfg.iterations seeded runs.
//
// Iteration i seeds its sampler with base_seed + i and collects one sample,
// which then serves every evaluation node. Per-iteration estimates are
// reduced in iteration order, so the thread count never changes the output.
inline std::vector<ErrorRecord> run_experiment(const Graph& g, const ExperimentConfig& cfg) {
  validate(cfg);
  const Metric metric = experiment_metric(cfg.methods);
  if (g.num_nodes() < 2) throw DomainError("experiment needs a graph with n >= 2");

  CentralityVector exact;
  try {
    exact = metric == Metric::kDegree ? all_degree(g) : all_closeness(g, cfg.threads);
  } catch (const Error& e) {
    throw DomainError(std::string("exact ") + to_string(metric) + " oracle failed: " + e.what());
  }
  const auto ranks = exact_ranks(exact);

  std::vector<NodeId> nodes;
  if (cfg.eval_count) {
    nodes = stratify_eval_nodes(ranks, *cfg.eval_count);
  } else {
    nodes = stratify_eval_nodes(ranks, g.num_nodes());
  }

  const std::size_t k = nodes.size();
  std::vector<ErrorRecord> records(k);
  for (std::size_t i = 0; i < k; ++i) {
    records[i].node = nodes[i];
    records[i].label = g.label(nodes[i]);
    records[i].actual_rank = ranks[nodes[i]];
  }

  const double n_true = g.num_nodes();
  for (Method method : cfg.methods) {
    std::vector<double> est(k * cfg.iterations);
    auto fill_all_iterations = [&](std::size_t node_idx, double value) {
      for (std::size_t it = 0; it < cfg.iterations; ++it) est[it * k + node_idx] = value;
    };
    try {
      switch (method) {
        case Method::kPowerLaw: {
          const PowerLawParams pl = fit_power_law(cfg.params.resolve(g));
          for (std::size_t i = 0; i < k; ++i) {
            fill_all_iterations(
                i, estimate_degree_rank_pl(pl, static_cast<double>(g.degree(nodes[i]))).value);
          }
          break;
        }
        case Method::kClosenessSigmoid: {
          // The exact vector already holds each node's closeness, which is
          // what the per-query BFS would compute.
          const SigmoidParams sp = fit_sigmoid(g, cfg.slope);
          for (std::size_t i = 0; i < k; ++i) {
            fill_all_iterations(
                i, actual_rank_from_reverse(reverse_rank(exact.values[nodes[i]], sp), sp.n));
          }
          break;
        }
        case Method::kUniform:
        case Method::kMetropolisHastings:
        case Method::kRandomWalk: {
          const double n_est = method == Method::kUniform ? n_true : cfg.params.resolve(g).n;
          detail::run_in_parallel(cfg.iterations, cfg.threads, [&](std::size_t it) {
            Rng rng(cfg.base_seed + it);
            const std::size_t s = sample_size(cfg.sample_frac, n_est);
            Sample sample;
            if (method == Method::kUniform) {
              GlobalAccess access(g);
              sample = sample_uniform(access, s, rng);
            } else {
              LocalAccess access(g);
              const NodeId start = random_walk_start(g, rng);
              if (method == Method::kMetropolisHastings) {
                sample = mh_walk(access, start, s, cfg.burn_in, rng);
              } else {
                sample = reweight(rw_walk(access, start, s, cfg.burn_in, rng), s, rng);
              }
            }
            const SampleIndex index(sample);
            for (std::size_t i = 0; i < k; ++i) {
              const NodeId u = nodes[i];
              est[it * k + i] = extrapolate(
                  static_cast<double>(index.local_rank(u, g.degree(u))), n_est, index.size());
            }
          });
          break;
        }
      }
    } catch (const Error& e) {
      throw DomainError(std::string("method ") + std::string(to_string(method)) + ": " +
                        e.what());
    }

    const double iters = static_cast<double>(cfg.iterations);
    // Sums are shifted by the first iteration's values, so a constant series
    // (deterministic methods) gets its exact value and std 0.
    for (std::size_t i = 0; i < k; ++i) {
      const double actual = static_cast<double>(records[i].actual_rank);
      auto err = [&](std::size_t it) { return std::abs(est[it * k + i] - actual); };
      const double est0 = est[i], err0 = err(0);
      double d_est = 0.0, d_err = 0.0, d_err2 = 0.0;
      for (std::size_t it = 0; it < cfg.iterations; ++it) {
        d_est += est[it * k + i] - est0;
        const double d = err(it) - err0;
        d_err += d;
        d_err2 += d * d;
      }
      MethodStats st;
      st.method = method;
      st.mean_est = est0 + d_est / iters;
      st.mae = err0 + d_err / iters;
      const double mean_d = d_err / iters;
      st.std = std::sqrt(std::max(0.0, d_err2 / iters - mean_d * mean_d));
      records[i].stats.push_back(st);
    }
  }
  return records;
}

inline std::string format_fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

// '#'-prefixed header lines echoing config, graph and seeds. No timestamps.
inline std::vector<std::string> experiment_metadata(const Graph& g, const ExperimentConfig& cfg) {
  std::vector<std::string> lines;
  std::string methods;
  for (Method m : cfg.methods) {
    if (!methods.empty()) methods += ',';
    methods += to_string(m);
  }
  lines.push_back("# methods=" + methods + " metric=" + to_string(experiment_metric(cfg.methods)));
  lines.push_back("# graph nodes=" + std::to_string(g.num_nodes()) +
                  " edges=" + std::to_string(g.num_edges()));
  if (g.num_nodes() > 0) {
    const auto s = degree_stats(g);
    lines.push_back("# degree d_min=" + std::to_string(s.d_min) +
                    " d_max=" + std::to_string(s.d_max) + " d_avg=" + format_fixed(s.d_avg));
  }
  lines.push_back("# sample_frac=" + format_fixed(cfg.sample_frac) +
                  " iterations=" + std::to_string(cfg.iterations) +
                  " burn_in=" + std::to_string(cfg.burn_in) + " slope=" + format_fixed(cfg.slope));
  lines.push_back("# seeds: iteration i uses base_seed + i, base_seed=" +
                  std::to_string(cfg.base_seed));
  lines.push_back("# eval_nodes=" +
                  (cfg.eval_count ? "stratified:" + std::to_string(*cfg.eval_count)
                                  : std::string("all")));
  if (!cfg.params.is_ground_truth() && g.num_nodes() > 0) {
    const auto p = cfg.params.resolve(g);
    lines.push_back("# params provided n=" + format_fixed(p.n) + " d_min=" + format_fixed(p.d_min) +
                    " d_max=" + format_fixed(p.d_max) + " d_avg=" + format_fixed(p.d_avg));
  } else {
    lines.push_back("# params ground-truth");
  }
  return lines;
}

inline void emit_csv(const std::vector<ErrorRecord>& records, const std::vector<Method>& methods,
                     std::ostream& out, const std::vector<std::string>& metadata = {}) {
  for (const auto& line : metadata) out << line << '\n';
  out << "node,actual_rank";
  for (Method m : methods) {
    const std::string name(to_string(m));
    out << ',' << name << "_mean_est," << name << "_mae," << name << "_std";
  }
  out << '\n';
  for (const auto& r : records) {
    out << r.label << ',' << r.actual_rank;
    for (const auto& st : r.stats) {
      out << ',' << format_fixed(st.mean_est) << ',' << format_fixed(st.mae) << ','
          << format_fixed(st.std);
    }
    out << '\n';
  }
  out.flush();
  if (!out) throw Error("write failure while emitting CSV");
}

struct ParsedCsv {
  std::vector<Method> methods;
  std::vector<ErrorRecord> records;  // node ids unset; labels filled
};

// Reads back what emit_csv writes.
inline ParsedCsv parse_csv(std::istream& in) {
  ParsedCsv out;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto cells = split(line);
    if (!have_header) {
      if (cells.size() < 2 || cells[0] != "node" || cells[1] != "actual_rank" ||
          (cells.size() - 2) % 3 != 0) {
        throw ParseError(lineno, "unexpected CSV header");
      }
      for (std::size_t c = 2; c < cells.size(); c += 3) {
        const std::string& col = cells[c];
        const std::string suffix = "_mean_est";
        if (col.size() <= suffix.size() ||
            col.compare(col.size() - suffix.size(), suffix.size(), suffix) != 0) {
          throw ParseError(lineno, "bad column " + col);
        }
        auto m = parse_method(col.substr(0, col.size() - suffix.size()));
        if (!m) throw ParseError(lineno, "unknown method column " + col);
        out.methods.push_back(*m);
      }
      have_header = true;
      continue;
    }
    if (cells.size() != 2 + 3 * out.methods.size()) {
      throw ParseError(lineno, "expected " + std::to_string(2 + 3 * out.methods.size()) +
                                   " cells");
    }
    ErrorRecord r;
    r.label = cells[0];
    r.actual_rank = std::stoull(cells[1]);
    for (std::size_t j = 0; j < out.methods.size(); ++j) {
      MethodStats st;
      st.method = out.methods[j];
      st.mean_est = std::stod(cells[2 + 3 * j]);
      st.mae = std::stod(cells[3 + 3 * j]);
      st.std = std::stod(cells[4 + 3 * j]);
      r.stats.push_back(st);
    }
    out.records.push_back(std::move(r));
  }
  if (!have_header) throw ParseError(lineno, "missing CSV header");
  return out;
}

}  // namespace grank
