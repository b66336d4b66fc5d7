#include <doctest.h>

#include <cmath>
#include <random>

#include "fairprice/oracles.hpp"
#include "support/random_markets.hpp"

using namespace fairprice;

namespace {

MarketSpec identical_uniform(std::size_t k) {
  MarketSpec spec;
  for (std::size_t i = 0; i < k; ++i) {
    spec.segments.push_back({{static_cast<double>(i)}, 1.0 / static_cast<double>(k),
                             ContinuousValuation({0, 1}, family::Uniform{})});
  }
  return spec;
}

}  // namespace

TEST_CASE("discrete oracle edge cases") {
  MarketSpec spec;
  spec.support = {0.0, 2.0};
  spec.segments.push_back({{0.0}, 0.5, DiscreteValuation({1, 2}, {0.9, 0.1})});
  spec.segments.push_back({{1.0}, 0.5, DiscreteValuation({1, 2}, {0.1, 0.9})});
  const OracleResult loose = oracle_discrete_ffp(spec, 1e6);
  CHECK(loose.prices == optimal_fp(spec).prices);

  MarketSpec single;
  single.support = {0.0, 3.0};
  single.segments.push_back({{0.0}, 0.5, DiscreteValuation({3}, {1})});
  single.segments.push_back({{1.0}, 0.5, DiscreteValuation({3}, {1})});
  const OracleResult one = oracle_discrete_ffp(single, 0.4);
  CHECK(one.prices == PriceVector{3, 3});
  CHECK(one.revenue == 3.0);
}

TEST_CASE("grid oracle on simple instances") {
  for (std::size_t k : {1u, 2u, 3u}) {
    const OracleResult r = oracle_grid_convex(identical_uniform(k), 0.2, 1e-3);
    for (double p : r.prices) CHECK(p == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.revenue == doctest::Approx(0.25));
  }

  MarketSpec binding;
  binding.segments.push_back({{0.0}, 0.5, ContinuousValuation({0, 1}, family::Uniform{})});
  binding.segments.push_back({{0.04}, 0.5, ContinuousValuation({0, 1}, family::Power{2.0})});
  const double p1 = (-2.24 + std::sqrt(28.96)) / 6.0;
  const OracleResult r = oracle_grid_convex(binding, 1.0, 1e-4);
  CHECK(std::abs(r.prices[0] - p1) <= 2e-4);
  CHECK(std::abs(r.prices[1] - (p1 + 0.04)) <= 2e-4);

  const OracleResult uniform_price = oracle_grid_convex(binding, 0.0, 1e-3);
  CHECK(uniform_price.prices[0] == uniform_price.prices[1]);
  double best = 0.0;
  for (int t = 0; t <= 1000; ++t) {
    const double p = t / 1000.0;
    best = std::max(best, total_revenue(binding, std::vector<double>{p, p}));
  }
  CHECK(uniform_price.revenue == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("grid oracle refuses large or discrete markets") {
  CHECK_THROWS_AS(oracle_grid_convex(identical_uniform(4), 0.1, 1e-2), UnsupportedShape);
  MarketSpec disc;
  disc.support = {0.0, 2.0};
  disc.segments.push_back({{0.0}, 1.0, DiscreteValuation({1, 2}, {0.5, 0.5})});
  CHECK_THROWS_AS(oracle_grid_convex(disc, 0.1, 1e-2), UnsupportedShape);
  CHECK_THROWS_AS(oracle_grid_convex(identical_uniform(2), 0.1, 0.0), std::invalid_argument);
}

TEST_CASE("grid oracle never loses value as the grid refines") {
  std::mt19937_64 rng(61);
  for (int n = 0; n < 8; ++n) {
    const auto k = static_cast<std::size_t>(testing::integer(rng, 2, 3));
    const MarketSpec spec = testing::random_continuous_market(rng, k);
    const double alpha = testing::uniform(rng, 0.0, 0.5);
    const double coarse = oracle_grid_convex(spec, alpha, 1e-2).revenue;
    const double mid = oracle_grid_convex(spec, alpha, 1e-3).revenue;
    const double fine = oracle_grid_convex(spec, alpha, 1e-4).revenue;
    CHECK(mid >= coarse);
    CHECK(fine >= mid);
  }
}

TEST_CASE("grid oracle results are fair") {
  std::mt19937_64 rng(62);
  for (int n = 0; n < 30; ++n) {
    const MarketSpec spec = testing::random_continuous_market(rng, 3);
    const double alpha = testing::uniform(rng, 0.0, 1.0);
    const OracleResult r = oracle_grid_convex(spec, alpha, 1e-2);
    CHECK(is_alpha_fair(r.prices, pairwise_distances(spec), alpha).fair);
    CHECK(r.revenue == doctest::Approx(total_revenue(spec, r.prices)).epsilon(1e-12));
  }
}

TEST_CASE("pivot scan with only the support endpoints") {
  LinPInputs in;
  in.p_hat = {0.5};
  in.pi_hat = {0.25};
  in.beta = {1.0};
  in.min_dist = {std::numeric_limits<double>::infinity()};
  in.support = {0.0, 1.0};
  in.alpha = 0.2;
  const PivotScanResult r = oracle_pivot_scan(in);
  CHECK(critical_points(in).size() == 2);
  CHECK(r.pivot == 0.0);
  CHECK(r.value == 0.25);
}

TEST_CASE("pivot scan on the plateau instance") {
  LinPInputs in;
  in.p_hat = {0.1, 0.9};
  in.pi_hat = {0.5, 0.5};
  in.beta = {0.5, 0.5};
  in.min_dist = {0.4, 0.4};
  in.support = {0.0, 1.0};
  in.alpha = 1.0;
  const PivotScanResult r = oracle_pivot_scan(in);
  CHECK(r.pivot == doctest::Approx(0.3));
  CHECK(r.value == doctest::Approx(0.388889).epsilon(1e-5));
}
