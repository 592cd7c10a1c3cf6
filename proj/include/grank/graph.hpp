#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "grank/error.hpp"

namespace grank {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

// Immutable simple undirected graph in CSR form.
//
// Internal ids are dense in [0, n). External labels are kept when the graph
// came from a file; generated graphs use the decimal id as their label.
// Adjacency lists are sorted ascending and free of self-loops and duplicates.
class Graph {
 public:
  Graph() : offsets_(1, 0) {}

  // Builds a graph over nodes [0, n). Self-loops are dropped and duplicate
  // edges (in either orientation) are collapsed; both are counted.
  static Graph from_edges(NodeId n, std::span<const Edge> edges,
                          std::vector<std::string> labels = {}) {
    if (!labels.empty() && labels.size() != n) {
      throw ParameterError("label count " + std::to_string(labels.size()) +
                           " does not match node count " + std::to_string(n));
    }
    std::vector<Edge> canon;
    canon.reserve(edges.size());
    Graph g;
    for (auto [a, b] : edges) {
      if (a >= n || b >= n) {
        throw ParameterError("edge (" + std::to_string(a) + ", " +
                             std::to_string(b) + ") references a node >= " +
                             std::to_string(n));
      }
      if (a == b) {
        ++g.self_loops_dropped_;
        continue;
      }
      canon.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(canon.begin(), canon.end());
    auto last = std::unique(canon.begin(), canon.end());
    g.duplicates_dropped_ = static_cast<std::size_t>(canon.end() - last);
    canon.erase(last, canon.end());

    g.offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (auto [a, b] : canon) {
      ++g.offsets_[a + 1];
      ++g.offsets_[b + 1];
    }
    for (std::size_t i = 1; i < g.offsets_.size(); ++i) {
      g.offsets_[i] += g.offsets_[i - 1];
    }
    g.adj_.resize(canon.size() * 2);
    std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    // canon is sorted by (min, max): a node receives its smaller neighbors
    // (ascending) before its own group of larger ones, so lists come out sorted.
    for (auto [a, b] : canon) {
      g.adj_[fill[a]++] = b;
      g.adj_[fill[b]++] = a;
    }
    g.labels_ = std::move(labels);
    if (!g.labels_.empty()) {
      g.index_.reserve(g.labels_.size());
      for (NodeId u = 0; u < n; ++u) g.index_.emplace(g.labels_[u], u);
    }
    return g;
  }

  NodeId num_nodes() const noexcept {
    return static_cast<NodeId>(offsets_.size() - 1);
  }
  std::uint64_t num_edges() const noexcept { return adj_.size() / 2; }

  std::size_t degree(NodeId u) const { return offsets_[u + 1] - offsets_[u]; }

  std::span<const NodeId> neighbors(NodeId u) const {
    return {adj_.data() + offsets_[u], degree(u)};
  }

  bool has_edge(NodeId u, NodeId v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  std::string label(NodeId u) const {
    return labels_.empty() ? std::to_string(u) : labels_[u];
  }

  bool has_labels() const noexcept { return !labels_.empty(); }

  // Resolves an external label to an internal id.
  std::optional<NodeId> find(const std::string& label) const {
    if (!labels_.empty()) {
      auto it = index_.find(label);
      if (it == index_.end()) return std::nullopt;
      return it->second;
    }
    NodeId id = 0;
    std::istringstream in(label);
    if (!(in >> id) || !in.eof() || id >= num_nodes()) return std::nullopt;
    if (std::to_string(id) != label) return std::nullopt;
    return id;
  }

  std::size_t self_loops_dropped() const noexcept { return self_loops_dropped_; }
  std::size_t duplicates_dropped() const noexcept { return duplicates_dropped_; }

  // Every undirected edge once, as (u, v) with u < v, in ascending order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(num_edges());
    for (NodeId u = 0; u < num_nodes(); ++u) {
      for (NodeId v : neighbors(u)) {
        if (u < v) out.emplace_back(u, v);
      }
    }
    return out;
  }

  // Checks symmetry, simplicity, sortedness and the handshake identity.
  bool is_valid() const {
    std::uint64_t degree_sum = 0;
    for (NodeId u = 0; u < num_nodes(); ++u) {
      auto nb = neighbors(u);
      degree_sum += nb.size();
      for (std::size_t i = 0; i < nb.size(); ++i) {
        if (nb[i] == u || nb[i] >= num_nodes()) return false;
        if (i > 0 && nb[i - 1] >= nb[i]) return false;
        if (!has_edge(nb[i], u)) return false;
      }
    }
    return degree_sum == 2 * num_edges();
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.offsets_ == b.offsets_ && a.adj_ == b.adj_;
  }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> adj_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> index_;
  std::size_t self_loops_dropped_ = 0;
  std::size_t duplicates_dropped_ = 0;
};

// Reads a whitespace-separated edge list. Lines starting with '#' and blank
// lines are skipped; labels are assigned dense ids in first-appearance order.
inline Graph load_edge_list(std::istream& in) {
  std::unordered_map<std::string, NodeId> ids;
  std::vector<std::string> labels;
  std::vector<Edge> edges;
  auto intern = [&](const std::string& label) {
    auto [it, inserted] = ids.try_emplace(label, static_cast<NodeId>(labels.size()));
    if (inserted) labels.push_back(label);
    return it->second;
  };

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#') continue;
    std::istringstream tokens(line);
    std::string a, b, extra;
    if (!(tokens >> a >> b) || (tokens >> extra)) {
      throw ParseError(lineno, "expected exactly two node labels, got \"" + line + "\"");
    }
    NodeId u = intern(a);
    NodeId v = intern(b);
    edges.emplace_back(u, v);
  }
  if (in.bad()) throw Error("read failure while loading edge list");
  if (edges.empty()) throw ParseError(lineno, "edge list contains no edges");
  const auto n = static_cast<NodeId>(labels.size());
  return Graph::from_edges(n, edges, std::move(labels));
}

inline Graph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open graph file '" + path + "'");
  return load_edge_list(in);
}

inline void write_edge_list(const Graph& g, std::ostream& out) {
  out << "# nodes " << g.num_nodes() << " edges " << g.num_edges() << '\n';
  for (auto [u, v] : g.edges()) out << g.label(u) << ' ' << g.label(v) << '\n';
  if (!out) throw Error("write failure while saving edge list");
}

// Barabasi-Albert preferential attachment. Starts from a clique on
// m_attach + 1 nodes; every later node attaches to m_attach distinct existing
// nodes chosen with probability proportional to their current degree.
inline Graph generate_ba(NodeId n, NodeId m_attach, std::uint64_t seed) {
  if (m_attach < 1) throw ParameterError("m_attach must be >= 1");
  if (n <= m_attach) {
    throw ParameterError("BA generator needs n > m_attach (n=" + std::to_string(n) +
                         ", m_attach=" + std::to_string(m_attach) + ")");
  }
  std::mt19937_64 rng(seed);
  std::vector<Edge> edges;
  // Each node appears once per incident edge end: uniform picks from this
  // pool are degree-proportional.
  std::vector<NodeId> pool;
  const NodeId core = m_attach + 1;
  edges.reserve(static_cast<std::size_t>(n) * m_attach);
  pool.reserve(static_cast<std::size_t>(n) * m_attach * 2);
  for (NodeId u = 0; u < core; ++u) {
    for (NodeId v = u + 1; v < core; ++v) {
      edges.emplace_back(u, v);
      pool.push_back(u);
      pool.push_back(v);
    }
  }
  std::vector<NodeId> targets;
  targets.reserve(m_attach);
  for (NodeId u = core; u < n; ++u) {
    targets.clear();
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    while (targets.size() < m_attach) {
      NodeId t = pool[pick(rng)];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) {
        targets.push_back(t);
      }
    }
    for (NodeId t : targets) {
      edges.emplace_back(t, u);
      pool.push_back(t);
      pool.push_back(u);
    }
  }
  return Graph::from_edges(n, edges);
}

// Erdos-Renyi G(n, p) using geometric skipping over the lower triangle.
inline Graph generate_er(NodeId n, double p_edge, std::uint64_t seed) {
  if (!(p_edge >= 0.0 && p_edge <= 1.0)) {
    throw ParameterError("edge probability must lie in [0, 1], got " + std::to_string(p_edge));
  }
  std::vector<Edge> edges;
  if (p_edge == 1.0) {
    for (NodeId v = 1; v < n; ++v)
      for (NodeId w = 0; w < v; ++w) edges.emplace_back(w, v);
    return Graph::from_edges(n, edges);
  }
  if (p_edge > 0.0 && n > 1) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double log_q = std::log1p(-p_edge);
    std::int64_t v = 1;
    std::int64_t w = -1;
    while (v < n) {
      const double r = unit(rng);
      w += 1 + static_cast<std::int64_t>(std::floor(std::log1p(-r) / log_q));
      while (w >= v && v < n) {
        w -= v;
        ++v;
      }
      if (v < n) edges.emplace_back(static_cast<NodeId>(w), static_cast<NodeId>(v));
    }
  }
  return Graph::from_edges(n, edges);
}

struct DegreeStats {
  std::size_t d_min = 0;
  std::size_t d_max = 0;
  double d_avg = 0.0;
};

inline DegreeStats degree_stats(const Graph& g) {
  if (g.num_nodes() == 0) throw ParameterError("degree statistics need at least one node");
  DegreeStats s{g.degree(0), g.degree(0), 0.0};
  for (NodeId u = 1; u < g.num_nodes(); ++u) {
    s.d_min = std::min(s.d_min, g.degree(u));
    s.d_max = std::max(s.d_max, g.degree(u));
  }
  s.d_avg = 2.0 * static_cast<double>(g.num_edges()) / g.num_nodes();
  return s;
}

// Induced subgraph plus the id translation in both directions.
struct Subgraph {
  Graph graph;
  std::vector<NodeId> to_parent;    // new id -> parent id
  std::vector<NodeId> from_parent;  // parent id -> new id, kNoNode if dropped

  std::optional<NodeId> map(NodeId parent) const {
    NodeId id = from_parent.at(parent);
    if (id == kNoNode) return std::nullopt;
    return id;
  }
};

// `keep` must be sorted ascending; relative id order is preserved.
inline Subgraph induced_subgraph(const Graph& g, std::span<const NodeId> keep) {
  Subgraph sub;
  sub.to_parent.assign(keep.begin(), keep.end());
  sub.from_parent.assign(g.num_nodes(), kNoNode);
  for (NodeId i = 0; i < keep.size(); ++i) sub.from_parent[keep[i]] = i;
  std::vector<Edge> edges;
  std::vector<std::string> labels;
  if (g.has_labels()) labels.reserve(keep.size());
  for (NodeId i = 0; i < keep.size(); ++i) {
    const NodeId u = keep[i];
    if (g.has_labels()) labels.push_back(g.label(u));
    for (NodeId v : g.neighbors(u)) {
      const NodeId j = sub.from_parent[v];
      if (j != kNoNode && i < j) edges.emplace_back(i, j);
    }
  }
  const auto n = static_cast<NodeId>(keep.size());
  sub.graph = Graph::from_edges(n, edges, std::move(labels));
  return sub;
}

// Component label per node; components are numbered in order of their
// smallest member id.
inline std::vector<NodeId> component_labels(const Graph& g, NodeId* count = nullptr) {
  std::vector<NodeId> comp(g.num_nodes(), kNoNode);
  std::vector<NodeId> queue;
  NodeId next = 0;
  for (NodeId s = 0; s < g.num_nodes(); ++s) {
    if (comp[s] != kNoNode) continue;
    comp[s] = next;
    queue.assign(1, s);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (NodeId v : g.neighbors(queue[head])) {
        if (comp[v] == kNoNode) {
          comp[v] = next;
          queue.push_back(v);
        }
      }
    }
    ++next;
  }
  if (count) *count = next;
  return comp;
}

inline bool is_connected(const Graph& g) {
  NodeId count = 0;
  component_labels(g, &count);
  return count <= 1;
}

// Largest component; ties go to the component holding the smallest id.
inline Subgraph largest_connected_component(const Graph& g) {
  if (g.num_nodes() == 0) throw ParameterError("graph has no nodes");
  NodeId count = 0;
  auto comp = component_labels(g, &count);
  std::vector<std::size_t> sizes(count, 0);
  for (NodeId c : comp) ++sizes[c];
  const auto best = static_cast<NodeId>(
      std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  std::vector<NodeId> keep;
  keep.reserve(sizes[best]);
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    if (comp[u] == best) keep.push_back(u);
  }
  return induced_subgraph(g, keep);
}

}  // namespace grank
