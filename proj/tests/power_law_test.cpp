#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "grank/power_law.hpp"
#include "support/oracles.hpp"

namespace grank {
namespace {

// Integral of c * j^-gamma over [a, b], by Simpson in log space (j = e^t),
// where the integrand c * e^{(1 - gamma) t} is smooth.
double density_integral(const PowerLawParams& p, double a, double b) {
  return oracle::simpson(
      [&](double t) { return p.c * std::exp((1.0 - p.gamma) * t); }, std::log(a), std::log(b),
      20000);
}

PowerLawParams reference_params() {
  PowerLawParams p;
  p.gamma = 2.5;
  p.c = estimate_c(2.5, 1, 100);
  p.d_min = 1;
  p.d_max = 100;
  p.n = 1000;
  return p;
}

TEST(EstimateGamma, ClosedForm) {
  EXPECT_EQ(estimate_gamma(1, 3), 2.5);
  EXPECT_EQ(estimate_gamma(2, 4), 3.0);
  EXPECT_THROW(estimate_gamma(2, 2), DegenerateDistributionError);
  EXPECT_THROW(estimate_gamma(3, 2.5), DegenerateDistributionError);
  DegreeStats s{1, 50, 3.0};
  EXPECT_EQ(estimate_gamma(s), 2.5);
}

TEST(EstimateC, ClosedFormAndNormalisation) {
  EXPECT_NEAR(estimate_c(2.5, 1, 100), 1.5015015015, 1e-9);
  EXPECT_NEAR(estimate_c(3.0, 2, 100), 8.0032012805, 1e-9);
  EXPECT_THROW(estimate_c(2.5, 5, 5), DegenerateDistributionError);
  EXPECT_THROW(estimate_c(1.0, 1, 100), ParameterError);
  EXPECT_THROW(estimate_c(2.5, 0, 100), ParameterError);

  for (double gamma : {2.1, 2.5, 3.0, 4.2}) {
    for (auto [lo, hi] : {std::pair{1.0, 100.0}, {2.0, 40.0}, {5.0, 2000.0}}) {
      PowerLawParams p{gamma, estimate_c(gamma, lo, hi), lo, hi, 1.0};
      EXPECT_NEAR(density_integral(p, lo, hi), 1.0, 1e-9) << gamma << " " << lo << " " << hi;
    }
  }
}

TEST(ExpectedDegreeCount, Values) {
  auto p = reference_params();
  EXPECT_NEAR(expected_degree_count(p, 1), 1501.5015, 1e-3);
  // 1000 * 1.5015 * 100^-2.5
  EXPECT_NEAR(expected_degree_count(p, 100), 0.015015015, 1e-8);
  EXPECT_THROW(expected_degree_count(p, 0.5), DomainError);
  EXPECT_THROW(expected_degree_count(p, 101), DomainError);
  p.n = 0;
  EXPECT_EQ(expected_degree_count(p, 10), 0.0);
}

TEST(EstimateDegreeRankPl, ReferenceValues) {
  auto p = reference_params();
  const double oracle = p.n * density_integral(p, 2, 100) + 1.0;
  const auto est = estimate_degree_rank_pl(p, 1);
  EXPECT_NEAR(est.value, 353.9063, 1e-3);
  EXPECT_NEAR(est.value, oracle, 1e-6);
  EXPECT_EQ(est.method, Method::kPowerLaw);

  EXPECT_NEAR(expected_degree_rank_raw(p, 100), 0.98517, 1e-5);
  EXPECT_EQ(estimate_degree_rank_pl(p, 100).value, 1.0);
  EXPECT_EQ(estimate_degree_rank_pl(p, 0).value, estimate_degree_rank_pl(p, 1).value);
  EXPECT_EQ(estimate_degree_rank_pl(p, 500).value, 1.0);
}

TEST(FitPowerLaw, FromParameterSource) {
  Graph star = Graph::from_edges(5, std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  auto truth = ParameterSource::ground_truth().resolve(star);
  EXPECT_EQ(truth.n, 5.0);
  EXPECT_EQ(truth.d_min, 1.0);
  EXPECT_EQ(truth.d_max, 4.0);
  EXPECT_DOUBLE_EQ(truth.d_avg, 1.6);
  auto fit = fit_power_law(truth);
  EXPECT_DOUBLE_EQ(fit.gamma, 2.0 + 1.0 / 0.6);

  ParameterSource partial;
  partial.n = 1000;
  partial.d_avg = 3.0;
  auto mixed = partial.resolve(star);
  EXPECT_EQ(mixed.n, 1000.0);
  EXPECT_EQ(mixed.d_avg, 3.0);
  EXPECT_EQ(mixed.d_max, 4.0);
  EXPECT_FALSE(partial.is_ground_truth());

  Graph c5 = Graph::from_edges(5, std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}});
  EXPECT_THROW(fit_power_law(ParameterSource::ground_truth().resolve(c5)),
               DegenerateDistributionError);
}

TEST(PlProperty, MonotoneBoundedAndConsistentWithCounts) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> gam(2.05, 4.0);
  std::uniform_int_distribution<int> lo(1, 10);
  std::uniform_int_distribution<int> span(5, 2000);
  for (int trial = 0; trial < 100; ++trial) {
    NetworkParams np;
    np.d_min = lo(rng);
    np.d_max = np.d_min + span(rng);
    np.n = 100 + static_cast<double>(rng() % 100000);
    np.d_avg = np.d_min / (gam(rng) - 2.0) + np.d_min;
    const auto p = fit_power_law(np);
    ASSERT_GT(p.gamma, 2.0);
    ASSERT_GT(p.c, 0.0);
    double prev = p.n + 1;
    for (double d = p.d_min; d <= p.d_max; d += 1.0) {
      const double r = estimate_degree_rank_pl(p, d).value;
      ASSERT_GE(r, 1.0);
      ASSERT_LE(r, p.n);
      ASSERT_LE(r, prev);
      prev = r;
    }
    // estimate - 1 equals the integrated expected counts above d_u.
    for (double d : {p.d_min, std::floor((p.d_min + p.d_max) / 4)}) {
      if (d + 1 > p.d_max) continue;
      const double raw = expected_degree_rank_raw(p, d);
      const double counts = oracle::simpson(
          [&](double t) {
            const double j = std::clamp(std::exp(t), p.d_min, p.d_max);
            return expected_degree_count(p, j) * std::exp(t);
          },
          std::log(d + 1), std::log(p.d_max), 20000);
      EXPECT_NEAR(raw - 1.0, counts, 1e-6 * std::max(1.0, counts));
    }
  }
}

TEST(PlProperty, ErrorGrowsTowardsLowDegreeOnExactPowerLaw) {
  // Degrees floor(x) with x drawn from c x^-2.5 on [1, 1000] by inverse CDF;
  // the nodes above degree d are then exactly those with x >= d + 1.
  const double gamma = 2.5, lo = 1, hi = 1000;
  const std::size_t n = 100000;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double e = 1.0 - gamma;
  std::vector<double> deg(n);
  for (auto& d : deg) {
    const double u = unit(rng);
    d = std::floor(std::pow(std::pow(lo, e) + u * (std::pow(hi, e) - std::pow(lo, e)), 1.0 / e));
  }
  PowerLawParams p{gamma, estimate_c(gamma, lo, hi), lo, hi, static_cast<double>(n)};

  std::vector<double> sorted = deg;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::vector<std::pair<double, double>> rank_err;  // (actual rank, abs error)
  for (double d : deg) {
    const double actual = static_cast<double>(
        std::lower_bound(sorted.begin(), sorted.end(), d, std::greater<>()) - sorted.begin() + 1);
    rank_err.emplace_back(actual, std::abs(estimate_degree_rank_pl(p, d).value - actual));
  }
  std::sort(rank_err.begin(), rank_err.end());
  std::vector<double> bin_index, bin_mae;
  for (int b = 0; b < 10; ++b) {
    double sum = 0;
    const std::size_t from = b * n / 10, to = (b + 1) * n / 10;
    for (std::size_t i = from; i < to; ++i) sum += rank_err[i].second;
    bin_index.push_back(b);
    bin_mae.push_back(sum / static_cast<double>(to - from));
  }
  EXPECT_GT(oracle::spearman(bin_index, bin_mae), 0.0);
  EXPECT_LT(bin_mae.front(), bin_mae.back());
}

}  // namespace
}  // namespace grank
