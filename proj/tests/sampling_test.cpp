#include <gtest/gtest.h>

#include <cmath>
#include <thread>

#include "grank/exact.hpp"
#include "grank/sampling.hpp"
#include "support/oracles.hpp"

namespace grank {
namespace {

Graph cycle(NodeId n) {
  std::vector<Edge> e;
  for (NodeId i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return Graph::from_edges(n, e);
}

Graph star5() { return Graph::from_edges(5, std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}, {0, 4}}); }

// First seed whose G(50, 0.1) is connected.
Graph connected_er50() {
  for (std::uint64_t seed = 0;; ++seed) {
    Graph g = generate_er(50, 0.1, seed);
    if (is_connected(g)) return g;
  }
}

Sample sample_of_degrees(std::vector<std::size_t> degrees) {
  Sample s;
  NodeId id = 100;
  for (auto d : degrees) s.entries.push_back({id++, d});
  return s;
}

TEST(SampleUniform, FullCensusAndErrors) {
  Graph g = generate_ba(200, 2, 3);
  GlobalAccess access(g);
  Rng rng(1);
  Sample s = sample_uniform(access, 200, rng);
  std::vector<int> seen(200, 0);
  for (auto e : s.entries) {
    ++seen[e.node];
    EXPECT_EQ(e.degree, g.degree(e.node));
  }
  for (int c : seen) EXPECT_EQ(c, 1);
  EXPECT_THROW(sample_uniform(access, 201, rng), ParameterError);
  EXPECT_THROW(sample_uniform(access, 0, rng), ParameterError);
}

TEST(SampleUniform, SingleDrawIsUniform) {
  Graph g = cycle(10);
  GlobalAccess access(g);
  Rng rng(2024);
  std::vector<double> counts(10, 0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) ++counts[sample_uniform(access, 1, rng).entries[0].node];
  double chi2 = 0;
  for (double c : counts) chi2 += (c - draws / 10.0) * (c - draws / 10.0) / (draws / 10.0);
  EXPECT_LT(chi2, 27.88);  // chi-square, 9 dof, p = 0.001
}

TEST(SampleUniform, Deterministic) {
  Graph g = generate_ba(500, 3, 1);
  GlobalAccess access(g);
  Rng a(9), b(9);
  auto x = sample_uniform(access, 50, a);
  auto y = sample_uniform(access, 50, b);
  ASSERT_EQ(x.size(), y.size());
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(x.entries[i].node, y.entries[i].node);
}

TEST(LocalRank, Examples) {
  EXPECT_EQ(local_rank(sample_of_degrees({5, 3, 3, 1}), 0, 3), 2u);
  EXPECT_EQ(local_rank(Sample{}, 0, 3), 1u);
  Sample with_self;
  with_self.entries = {{7, 4}, {7, 4}, {8, 9}};
  EXPECT_EQ(local_rank(with_self, 7, 4), 2u);
  // Self entries are skipped even when queried with a smaller degree.
  EXPECT_EQ(local_rank(with_self, 7, 1), 2u);
  EXPECT_EQ(SampleIndex(with_self).local_rank(7, 1), 2u);
}

TEST(LocalRank, IndexAgreesWithScan) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    // A node always reports the same degree.
    std::vector<std::size_t> deg(15);
    for (auto& d : deg) d = rng() % 8;
    Sample s;
    for (int i = 0; i < 40; ++i) {
      const auto v = static_cast<NodeId>(rng() % 15);
      s.entries.push_back({v, deg[v]});
    }
    SampleIndex idx(s);
    for (NodeId u = 0; u < 20; ++u) {
      for (std::size_t d = 0; d < 10; ++d) ASSERT_EQ(idx.local_rank(u, d), local_rank(s, u, d));
    }
  }
}

TEST(Extrapolate, Examples) {
  EXPECT_DOUBLE_EQ(extrapolate(3, 1000, 10), 300.0);
  EXPECT_DOUBLE_EQ(extrapolate(1, 1000, 1000), 1.0);
  EXPECT_DOUBLE_EQ(extrapolate(10, 1000, 10), 1000.0);
  EXPECT_DOUBLE_EQ(extrapolate(11, 1000, 10), 1000.0);
  EXPECT_THROW(extrapolate(1, 1000, 0), ParameterError);
}

TEST(MhKernel, WorkedExample) {
  // u=0 with neighbours v=1 (degree 1) and w=2 (degree 4).
  Graph g = Graph::from_edges(6, std::vector<Edge>{{0, 1}, {0, 2}, {2, 3}, {2, 4}, {2, 5}});
  auto row = mh_transition(g, 0);
  ASSERT_EQ(row.size(), 3u);
  EXPECT_DOUBLE_EQ(row[0].second, 0.5);
  EXPECT_DOUBLE_EQ(row[1].second, 0.25);
  EXPECT_EQ(row[2].first, 0u);
  EXPECT_DOUBLE_EQ(row[2].second, 0.25);

  LocalAccess access(g);
  Rng rng(4);
  std::map<NodeId, double> hits;
  const int steps = 200000;
  for (int i = 0; i < steps; ++i) ++hits[mh_step(access, 0, rng)];
  for (auto [v, p] : row) EXPECT_NEAR(hits[v] / steps, p, 0.005) << v;
}

TEST(MhKernel, RegularGraphNeverStays) {
  Graph c = cycle(7);
  for (NodeId u = 0; u < 7; ++u) {
    auto row = mh_transition(c, u);
    EXPECT_DOUBLE_EQ(row[0].second, 0.5);
    EXPECT_DOUBLE_EQ(row[1].second, 0.5);
    EXPECT_DOUBLE_EQ(row[2].second, 0.0);
  }
}

TEST(MhWalk, StationaryDistributionIsUniform) {
  Graph g = connected_er50();
  LocalAccess access(g);
  Rng rng(31337);
  Sample s = mh_walk(access, 0, 1000000, 100, rng);
  std::vector<double> freq(g.num_nodes(), 0);
  for (auto e : s.entries) freq[e.node] += 1.0 / s.size();
  EXPECT_LE(oracle::total_variation(freq, std::vector<double>(g.num_nodes(), 1.0 / 50)), 0.02);
}

TEST(MhWalk, IsolatedStartFails) {
  Graph g = Graph::from_edges(3, std::vector<Edge>{{0, 1}});
  LocalAccess access(g);
  Rng rng(1);
  EXPECT_THROW(mh_walk(access, 2, 10, 0, rng), DomainError);
  EXPECT_THROW(rw_walk(access, 2, 10, 0, rng), DomainError);
}

TEST(RwWalk, SingleEdgeAlternates) {
  Graph g = Graph::from_edges(2, std::vector<Edge>{{0, 1}});
  LocalAccess access(g);
  Rng rng(5);
  Sample s = rw_walk(access, 0, 9, 0, rng);
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(s.entries[i].node, i % 2);
  Sample burned = rw_walk(access, 0, 4, 3, rng);
  EXPECT_EQ(burned.entries[0].node, 1u);
  EXPECT_EQ(burned.burn_in, 3u);
}

TEST(RwWalk, StarCentreGetsHalfTheVisits) {
  Graph g = star5();
  LocalAccess access(g);
  Rng rng(6);
  Sample s = rw_walk(access, 1, 1000000, 100, rng);
  double centre = 0;
  for (auto e : s.entries) centre += e.node == 0;
  EXPECT_NEAR(centre / s.size(), 0.5, 0.001);
}

TEST(RwWalk, Deterministic) {
  Graph g = generate_ba(1000, 3, 2);
  LocalAccess access(g);
  Rng a(8), b(8);
  auto x = rw_walk(access, 5, 500, 10, a);
  auto y = rw_walk(access, 5, 500, 10, b);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(x.entries[i].node, y.entries[i].node);
}

TEST(Reweight, InverseDegreeProbabilities) {
  Sample s;
  s.entries = {{0, 1}, {1, 3}};
  Rng rng(7);
  Sample out = reweight(s, 100000, rng);
  EXPECT_EQ(out.kind, SampleKind::kReweighted);
  double a = 0;
  for (auto e : out.entries) a += e.node == 0;
  EXPECT_NEAR(a / out.size(), 0.75, 0.005);

  Sample flat;
  for (NodeId i = 0; i < 4; ++i) flat.entries.push_back({i, 3});
  Sample uniform = reweight(flat, 100000, rng);
  std::vector<double> counts(4, 0);
  for (auto e : uniform.entries) ++counts[e.node];
  for (double c : counts) EXPECT_NEAR(c / 100000, 0.25, 0.005);

  EXPECT_THROW(reweight(Sample{}, 10, rng), ParameterError);
}

TEST(Reweight, RecoversDegreeDistributionOfBaGraph) {
  Graph g = generate_ba(10000, 5, 1);
  LocalAccess access(g);
  Rng rng(10);
  Sample walk = rw_walk(access, 0, 100000, 100, rng);
  Sample fixed = reweight(walk, walk.size(), rng);
  std::vector<double> sampled, truth, biased;
  for (auto e : fixed.entries) sampled.push_back(static_cast<double>(e.degree));
  for (auto e : walk.entries) biased.push_back(static_cast<double>(e.degree));
  for (NodeId u = 0; u < g.num_nodes(); ++u) truth.push_back(static_cast<double>(g.degree(u)));
  EXPECT_LE(oracle::ks_statistic(sampled, truth), 0.05);
  // Without re-weighting the walk is visibly biased towards hubs.
  EXPECT_GT(oracle::ks_statistic(biased, truth), 0.1);
}

TEST(Estimators, RegularGraphGivesEveryNodeTheSameEstimate) {
  Graph g = cycle(5);
  GlobalAccess access(g);
  for (double frac : {0.2, 0.6, 1.0}) {
    SamplingOptions opt{frac, 10, 3};
    for (NodeId u = 0; u < 5; ++u) {
      const double expected = clamp_rank(5.0 / sample_size(frac, 5), 5);
      EXPECT_DOUBLE_EQ(estimate_degree_rank_us(access, u, opt).value, expected);
      EXPECT_DOUBLE_EQ(estimate_degree_rank_mh(access, u, 0, 5, opt).value, expected);
      EXPECT_DOUBLE_EQ(estimate_degree_rank_rw(access, u, 0, 5, opt).value, expected);
    }
  }
}

TEST(Estimators, FullCensusIsExact) {
  Graph g = generate_ba(300, 3, 4);
  GlobalAccess access(g);
  for (NodeId u = 0; u < g.num_nodes(); u += 7) {
    auto est = estimate_degree_rank_us(access, u, {1.0, 0, 12});
    EXPECT_DOUBLE_EQ(est.value, static_cast<double>(degree_rank(g, u).rank));
    EXPECT_EQ(est.method, Method::kUniform);
  }
}

TEST(Estimators, UniformMeanNearActualAtMedianRank) {
  Graph g = generate_ba(10000, 5, 1);
  GlobalAccess access(g);
  NodeId target = 0;
  double best = 1e18;
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    const double gap = std::abs(static_cast<double>(degree_rank(g, u).rank) - 5000.0);
    if (gap < best) {
      best = gap;
      target = u;
    }
    if (gap < 200) break;
  }
  const double actual = static_cast<double>(degree_rank(g, target).rank);
  double sum = 0;
  for (std::uint64_t it = 0; it < 20; ++it) {
    sum += estimate_degree_rank_us(access, target, {0.01, 100, 1000 + it}).value;
  }
  EXPECT_NEAR(sum / 20, actual, 0.15 * actual);
}

TEST(Estimators, CrawlMethodsNeverTouchGlobalCapabilities) {
  Graph g = generate_ba(2000, 3, 5);
  GlobalAccess access(g);
  for (NodeId u : {0u, 10u, 1999u}) {
    estimate_degree_rank_mh(access, u, 7, 2000, {0.05, 50, u});
    estimate_degree_rank_rw(access, u, 7, 2000, {0.05, 50, u});
  }
  const auto c = access.counts();
  EXPECT_EQ(c.random_node, 0u);
  EXPECT_EQ(c.node_count, 0u);
  EXPECT_GT(c.random_neighbor, 0u);
  EXPECT_GT(c.degree, 0u);

  estimate_degree_rank_us(access, 0, {0.05, 0, 1});
  EXPECT_GT(access.counts().random_node, 0u);
  EXPECT_GT(access.counts().node_count, 0u);
}

TEST(Estimators, FixedSampleIsMonotoneInDegree) {
  Graph g = generate_ba(3000, 4, 9);
  LocalAccess access(g);
  Rng rng(3);
  Sample s = reweight(rw_walk(access, 0, 300, 50, rng), 300, rng);
  auto est = [&](NodeId u) {
    return extrapolate(static_cast<double>(local_rank(s, u, g.degree(u))), 3000, s.size());
  };
  std::mt19937_64 pick(4);
  for (int i = 0; i < 2000; ++i) {
    const NodeId u = pick() % 3000, v = pick() % 3000;
    if (g.degree(u) >= g.degree(v)) {
      EXPECT_LE(est(u), est(v));
    }
  }
}

TEST(Estimators, ConcurrentWalkersMatchSequentialRuns) {
  Graph g = generate_ba(5000, 3, 6);
  LocalAccess shared(g);
  std::vector<double> parallel(8), sequential(8);
  {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < 8; ++i) {
      pool.emplace_back([&, i] {
        parallel[i] = estimate_degree_rank_rw(shared, 42, 1, 5000, {0.02, 20, i}).value;
      });
    }
  }
  LocalAccess solo(g);
  for (std::size_t i = 0; i < 8; ++i) {
    sequential[i] = estimate_degree_rank_rw(solo, 42, 1, 5000, {0.02, 20, i}).value;
  }
  EXPECT_EQ(parallel, sequential);
  const auto a = shared.counts(), b = solo.counts();
  EXPECT_EQ(a.random_neighbor, b.random_neighbor);
  EXPECT_EQ(a.degree, b.degree);
}

TEST(SampleSize, CeilingAndBounds) {
  EXPECT_EQ(sample_size(0.01, 10000), 100u);
  EXPECT_EQ(sample_size(0.01, 50000), 500u);
  EXPECT_EQ(sample_size(0.01, 150), 2u);
  EXPECT_EQ(sample_size(1.0, 7), 7u);
  EXPECT_THROW(sample_size(0.0, 10), ParameterError);
  EXPECT_THROW(sample_size(1.5, 10), ParameterError);
}

}  // namespace
}  // namespace grank
