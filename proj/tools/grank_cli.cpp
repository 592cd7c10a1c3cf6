// grank: command-line front end for global rank estimation.
//
// Exit codes: 0 success, 1 usage error, 2 data or domain error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "grank/grank.hpp"

namespace {

constexpr int kUsageError = 1;
constexpr int kDomainError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GraphFlags {
  std::string path;
  std::string node;
};

struct ParamFlags {
  std::optional<double> n, d_min, d_max, d_avg;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--n", n, "Network size override (default: read from graph)");
    cmd->add_option("--dmin", d_min, "Minimum degree override");
    cmd->add_option("--dmax", d_max, "Maximum degree override");
    cmd->add_option("--davg", d_avg, "Average degree override");
  }

  grank::ParameterSource source() const {
    grank::ParameterSource s;
    s.n = n;
    s.d_min = d_min;
    s.d_max = d_max;
    s.d_avg = d_avg;
    return s;
  }
};

unsigned worker_threads() {
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("RANK_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap >= 1) threads = std::min<unsigned>(threads, static_cast<unsigned>(cap));
    } catch (const std::exception&) {
      throw UsageError(std::string("RANK_THREADS must be a positive integer, got '") + env + "'");
    }
  }
  return threads;
}

grank::NodeId resolve_node(const grank::Graph& g, const std::string& label) {
  auto id = g.find(label);
  if (!id) throw grank::DomainError("node '" + label + "' not found in graph");
  return *id;
}

grank::Graph load_graph(const std::string& path, bool quiet) {
  grank::Graph g = grank::load_edge_list(path);
  if (!quiet && (g.self_loops_dropped() || g.duplicates_dropped())) {
    std::cerr << "note: dropped " << g.self_loops_dropped() << " self-loops and "
              << g.duplicates_dropped() << " duplicate edges\n";
  }
  return g;
}

// Closeness is only defined on a connected graph; restrict to the largest
// component and say so.
grank::Subgraph connected_part(const grank::Graph& g, bool quiet) {
  grank::Subgraph sub = grank::largest_connected_component(g);
  if (!quiet && sub.graph.num_nodes() != g.num_nodes()) {
    std::cerr << "note: closeness restricted to the largest connected component ("
              << sub.graph.num_nodes() << " of " << g.num_nodes() << " nodes)\n";
  }
  return sub;
}

grank::NodeId node_in_component(const grank::Subgraph& sub, grank::NodeId parent,
                                const grank::Graph& g) {
  auto id = sub.map(parent);
  if (!id) {
    throw grank::DisconnectedGraphError("node '" + g.label(parent) +
                                        "' is outside the largest connected component");
  }
  return *id;
}

void print_result(const std::string& node, const std::string& method, const std::string& rank) {
  std::cout << "node=" << node << " method=" << method << " rank=" << rank << '\n';
}

std::vector<grank::Method> parse_methods(const std::string& list) {
  std::vector<grank::Method> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto m = grank::parse_method(item);
    if (!m) throw UsageError("unknown method '" + item + "'");
    out.push_back(*m);
  }
  if (out.empty()) throw UsageError("--methods needs at least one method");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Estimate the global centrality rank of a node", "grank"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.fallthrough();
  bool quiet = false;
  app.add_flag("--quiet,-q", quiet, "Suppress informational notes on stderr");

  // generate
  auto* gen = app.add_subcommand("generate", "Write a synthetic graph as an edge list");
  std::string model;
  grank::NodeId gen_n = 0;
  grank::NodeId m_attach = 5;
  double p_edge = 0.01;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--model", model, "Graph model")->required()->check(CLI::IsMember({"ba", "er"}));
  gen->add_option("--n", gen_n, "Number of nodes")->required();
  gen->add_option("--m-attach", m_attach, "Edges per new node (ba)");
  gen->add_option("--p", p_edge, "Edge probability (er)");
  gen->add_option("--seed", gen_seed, "Random seed");
  gen->add_option("-o,--output", gen_out, "Output file (default: stdout)");

  // exact-rank
  auto* exact = app.add_subcommand("exact-rank", "Exact competition rank of one node");
  GraphFlags exact_flags;
  std::string metric = "degree";
  exact->add_option("--graph", exact_flags.path, "Edge-list file")->required();
  exact->add_option("--node", exact_flags.node, "Node label")->required();
  exact->add_option("--metric", metric, "Centrality metric")
      ->check(CLI::IsMember({"degree", "closeness"}));

  // estimate
  auto* est = app.add_subcommand("estimate", "Estimate the rank of one node");
  GraphFlags est_flags;
  std::string method_name;
  double sample_frac = 0.01;
  std::size_t burn_in = 100;
  std::uint64_t est_seed = 0;
  double slope = grank::kDefaultSlope;
  std::string start_label;
  ParamFlags est_params;
  est->add_option("--method", method_name, "Estimator")
      ->required()
      ->check(CLI::IsMember({"pl", "us", "mh", "rw", "closeness-sigmoid"}));
  est->add_option("--graph", est_flags.path, "Edge-list file")->required();
  est->add_option("--node", est_flags.node, "Node label")->required();
  est->add_option("--sample-frac", sample_frac, "Sample size as a fraction of n (us, mh, rw)");
  est->add_option("--burn-in", burn_in, "Walk steps discarded before sampling (mh, rw)");
  est->add_option("--seed", est_seed, "Random seed");
  est->add_option("--slope", slope, "Logistic slope (closeness-sigmoid)");
  est->add_option("--start", start_label, "Walk start node (default: random from --seed)");
  est_params.add_to(est);

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "Error-versus-rank experiment, written as CSV");
  std::string eval_graph;
  std::string methods_list;
  grank::ExperimentConfig cfg;
  std::size_t eval_nodes = 0;
  bool use_lcc = false;
  std::string eval_out;
  ParamFlags eval_params;
  eval->add_option("--methods", methods_list, "Comma-separated: pl,us,mh,rw or closeness-sigmoid")
      ->required();
  eval->add_option("--graph", eval_graph, "Edge-list file")->required();
  eval->add_option("--iterations", cfg.iterations, "Seeded iterations per method");
  eval->add_option("--sample-frac", cfg.sample_frac, "Sample size as a fraction of n");
  eval->add_option("--burn-in", cfg.burn_in, "Walk steps discarded before sampling");
  eval->add_option("--seed", cfg.base_seed, "Base seed; iteration i uses seed + i");
  eval->add_option("--slope", cfg.slope, "Logistic slope (closeness-sigmoid)");
  eval->add_option("--eval-nodes", eval_nodes, "Rank-stratified node count (0: all nodes)");
  eval->add_flag("--lcc", use_lcc, "Restrict to the largest connected component first");
  eval->add_option("-o,--output", eval_out, "Output CSV (default: stdout)");
  eval_params.add_to(eval);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*gen) {
      grank::Graph g = model == "ba" ? grank::generate_ba(gen_n, m_attach, gen_seed)
                                     : grank::generate_er(gen_n, p_edge, gen_seed);
      if (gen_out.empty()) {
        grank::write_edge_list(g, std::cout);
      } else {
        std::ofstream out(gen_out);
        if (!out) throw grank::Error("cannot open '" + gen_out + "' for writing");
        grank::write_edge_list(g, out);
      }
      if (!quiet) {
        std::cerr << "generated " << model << " graph: " << g.num_nodes() << " nodes, "
                  << g.num_edges() << " edges\n";
      }
      return 0;
    }

    if (*exact) {
      grank::Graph g = load_graph(exact_flags.path, quiet);
      const grank::NodeId u = resolve_node(g, exact_flags.node);
      if (metric == "degree") {
        print_result(exact_flags.node, "exact-degree",
                     std::to_string(grank::degree_rank(g, u).rank));
      } else {
        auto sub = connected_part(g, quiet);
        const grank::NodeId v = node_in_component(sub, u, g);
        print_result(exact_flags.node, "exact-closeness",
                     std::to_string(grank::closeness_rank(sub.graph, v, worker_threads()).rank));
      }
      return 0;
    }

    if (*est) {
      grank::Graph g = load_graph(est_flags.path, quiet);
      const grank::NodeId u = resolve_node(g, est_flags.node);
      const grank::Method method = *grank::parse_method(method_name);
      const grank::SamplingOptions opt{sample_frac, burn_in, est_seed};
      grank::RankEstimate r;
      switch (method) {
        case grank::Method::kPowerLaw: {
          auto params = grank::fit_power_law(est_params.source().resolve(g));
          r = grank::estimate_degree_rank_pl(params, static_cast<double>(g.degree(u)), u);
          break;
        }
        case grank::Method::kUniform: {
          grank::GlobalAccess access(g);
          r = grank::estimate_degree_rank_us(access, u, opt);
          break;
        }
        case grank::Method::kMetropolisHastings:
        case grank::Method::kRandomWalk: {
          grank::NodeId start;
          if (!start_label.empty()) {
            start = resolve_node(g, start_label);
          } else {
            grank::Rng pick(est_seed);
            start = grank::random_walk_start(g, pick);
          }
          const double n = est_params.source().resolve(g).n;
          grank::LocalAccess access(g);
          r = method == grank::Method::kMetropolisHastings
                  ? grank::estimate_degree_rank_mh(access, u, start, n, opt)
                  : grank::estimate_degree_rank_rw(access, u, start, n, opt);
          break;
        }
        case grank::Method::kClosenessSigmoid: {
          auto sub = connected_part(g, quiet);
          r = grank::estimate_closeness_rank(sub.graph, node_in_component(sub, u, g), slope);
          break;
        }
      }
      print_result(est_flags.node, std::string(grank::to_string(method)),
                   grank::format_fixed(r.value));
      return 0;
    }

    if (*eval) {
      cfg.methods = parse_methods(methods_list);
      if (eval_nodes > 0) cfg.eval_count = eval_nodes;
      cfg.params = eval_params.source();
      cfg.threads = worker_threads();
      grank::Graph g = load_graph(eval_graph, quiet);
      if (use_lcc) g = connected_part(g, quiet).graph;
      auto records = grank::run_experiment(g, cfg);
      auto meta = grank::experiment_metadata(g, cfg);
      if (eval_out.empty()) {
        grank::emit_csv(records, cfg.methods, std::cout, meta);
      } else {
        std::ofstream out(eval_out);
        if (!out) throw grank::Error("cannot open '" + eval_out + "' for writing");
        grank::emit_csv(records, cfg.methods, out, meta);
      }
      if (!quiet) {
        std::cerr << "evaluated " << records.size() << " nodes over " << cfg.iterations
                  << " iterations\n";
      }
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const grank::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomainError;
  }
  return kUsageError;
}
