#include <doctest.h>

#include <random>

#include "fairprice/market.hpp"
#include "fairprice/market_io.hpp"
#include "support/random_markets.hpp"

using namespace fairprice;

namespace {

MarketSpec uniform_pair(double b1, double b2) {
  MarketSpec spec;
  spec.support = {0.0, 1.0};
  spec.segments.push_back({{0.0}, b1, ContinuousValuation({0.0, 1.0}, family::Uniform{})});
  spec.segments.push_back({{1.0}, b2, ContinuousValuation({0.0, 1.0}, family::Uniform{})});
  return spec;
}

bool mentions(const ValidationReport& r, std::string_view text) {
  for (const auto& v : r.violations) {
    if (v.find(text) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("a well-formed market validates cleanly") {
  const ValidationReport r = validate(uniform_pair(0.5, 0.5));
  CHECK(r.ok());
  CHECK(r.violations.empty());
}

TEST_CASE("beta sum rule") {
  const ValidationReport r = validate(uniform_pair(0.7, 0.7));
  CHECK_FALSE(r.ok());
  CHECK(mentions(r, "beta sum = 1.4"));
  CHECK_THROWS_AS(require_valid(uniform_pair(0.7, 0.7)), InvalidSpec);
}

TEST_CASE("zero or negative beta is rejected") {
  CHECK(mentions(validate(uniform_pair(0.0, 1.0)), "beta = 0"));
  CHECK_FALSE(validate(uniform_pair(-0.5, 1.5)).ok());
}

TEST_CASE("triangle inequality on explicit metrics") {
  MarketSpec spec = uniform_pair(0.4, 0.3);
  spec.segments.push_back({{}, 0.3, ContinuousValuation({0.0, 1.0}, family::Uniform{})});
  spec.metric = Metric::explicit_matrix({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}});
  const ValidationReport r = validate(spec);
  CHECK(mentions(r, "triangle inequality (1,3)"));
}

TEST_CASE("asymmetric or negative matrices are rejected") {
  MarketSpec spec = uniform_pair(0.5, 0.5);
  spec.metric = Metric::explicit_matrix({{0, 1}, {2, 0}});
  CHECK_FALSE(validate(spec).ok());
  spec.metric = Metric::explicit_matrix({{0, -1}, {-1, 0}});
  CHECK_FALSE(validate(spec).ok());
  spec.metric = Metric::explicit_matrix({{1, 1}, {1, 0}});
  CHECK_FALSE(validate(spec).ok());
}

TEST_CASE("validation collects every problem at once") {
  MarketSpec spec = uniform_pair(0.7, 0.7);
  spec.support = {1.0, 0.5};
  CHECK(validate(spec).violations.size() >= 2);
}

TEST_CASE("mixed valuation modes and mismatched value sets are rejected") {
  MarketSpec spec = uniform_pair(0.5, 0.5);
  spec.segments[1].valuation = DiscreteValuation({0.5}, {1.0});
  CHECK(mentions(validate(spec), "mix"));

  MarketSpec disc;
  disc.support = {0.0, 2.0};
  disc.segments.push_back({{0.0}, 0.5, DiscreteValuation({1.0, 2.0}, {0.5, 0.5})});
  disc.segments.push_back({{1.0}, 0.5, DiscreteValuation({1.0, 1.5}, {0.5, 0.5})});
  CHECK(mentions(validate(disc), "common value set"));

  disc.segments[1].valuation = DiscreteValuation({1.0, 2.0}, {0.1, 0.9});
  CHECK(validate(disc).ok());
  disc.support = {0.0, 1.5};
  CHECK(mentions(validate(disc), "outside the support"));
}

TEST_CASE("single-segment markets are accepted") {
  MarketSpec spec;
  spec.segments.push_back({{}, 1.0, ContinuousValuation({0.0, 1.0}, family::Uniform{})});
  CHECK(validate(spec).ok());
}

TEST_CASE("feature dimensions must agree") {
  MarketSpec spec = uniform_pair(0.5, 0.5);
  spec.segments[1].feature = {1.0, 2.0};
  CHECK(mentions(validate(spec), "dimension"));
  CHECK_THROWS_AS(pairwise_distances(spec), InvalidSpec);
}

TEST_CASE("pairwise distances") {
  MarketSpec spec = uniform_pair(0.5, 0.5);
  spec.segments[0].feature = {0.0};
  spec.segments[1].feature = {3.0};
  CHECK(pairwise_distances(spec)(0, 1) == 3.0);
  spec.segments[1].feature = {0.0};
  CHECK(pairwise_distances(spec)(0, 1) == 0.0);

  const DistanceMatrix m{{0, 1}, {1, 0}};
  spec.metric = Metric::explicit_matrix(m);
  CHECK(pairwise_distances(spec) == m);
}

TEST_CASE("nearest-neighbour distances") {
  CHECK(min_distances(DistanceMatrix{{0, 1}, {1, 0}}) == std::vector<double>{1, 1});
  CHECK(min_distances(DistanceMatrix{{0, 2, 5}, {2, 0, 3}, {5, 3, 0}}) == std::vector<double>{2, 2, 3});
  CHECK(min_distances(DistanceMatrix{{0, 4, 4}, {4, 0, 4}, {4, 4, 0}}) == std::vector<double>{4, 4, 4});
  CHECK_THROWS_AS(min_distances(DistanceMatrix{{0}}), UnsupportedShape);
}

TEST_CASE("euclidean distances are a metric and D_i is a row minimum") {
  std::mt19937_64 rng(3);
  for (int n = 0; n < 200; ++n) {
    const auto k = static_cast<std::size_t>(testing::integer(rng, 2, 8));
    MarketSpec spec = testing::random_continuous_market(rng, k);
    const DistanceMatrix d = pairwise_distances(spec);
    const std::vector<double> D = min_distances(d);
    for (std::size_t i = 0; i < k; ++i) {
      CHECK(d(i, i) == 0.0);
      for (std::size_t j = 0; j < k; ++j) {
        CHECK(d(i, j) >= 0.0);
        CHECK(d(i, j) == d(j, i));
        if (j != i) CHECK(D[i] <= d(i, j));
        for (std::size_t m = 0; m < k; ++m) CHECK(d(i, j) <= d(i, m) + d(m, j) + 1e-12);
      }
    }
    CHECK(validate(spec).ok());
  }
}

TEST_CASE("market JSON parsing") {
  const char* text = R"({
    "support": {"lo": 0.0, "hi": 2.0},
    "metric": {"kind": "euclidean"},
    "segments": [
      {"feature": [0.0, 1.5], "beta": 0.5,
       "valuation": {"kind": "discrete", "values": [1.0, 2.0], "probs": [0.6, 0.4]}},
      {"feature": [1.0, 1.5], "beta": 0.5,
       "valuation": {"kind": "discrete", "values": [1.0, 2.0], "probs": [0.2, 0.8]}}
    ]
  })";
  const MarketSpec spec = parse_market(text);
  CHECK(spec.size() == 2);
  CHECK(spec.is_discrete());
  CHECK(validate(spec).ok());
  CHECK(pairwise_distances(spec)(0, 1) == 1.0);
}

TEST_CASE("every continuous family parses") {
  const char* text = R"({
    "support": {"lo": 0, "hi": 1},
    "metric": {"kind": "matrix", "d": [[0,1,1,1,1],[1,0,1,1,1],[1,1,0,1,1],[1,1,1,0,1],[1,1,1,1,0]]},
    "segments": [
      {"beta": 0.2, "valuation": {"kind": "uniform"}},
      {"beta": 0.2, "valuation": {"kind": "power", "exponent": 2}},
      {"beta": 0.2, "valuation": {"kind": "trunc-exp", "rate": 1.0}},
      {"beta": 0.2, "valuation": {"kind": "triangle-revenue", "peak_price": 0.9, "peak_revenue": 0.5}},
      {"beta": 0.2, "valuation": {"kind": "empirical-cdf", "knots": [[0, 0], [0.5, 0.25], [1, 1]]}}
    ]
  })";
  const MarketSpec spec = parse_market(text);
  CHECK(validate(spec).ok());
  CHECK(spec.is_continuous());
}

TEST_CASE("malformed or unknown input is an InvalidSpec") {
  CHECK_THROWS_AS(parse_market("{ not json"), InvalidSpec);
  CHECK_THROWS_AS(parse_market(R"({"support": {"lo": 0, "hi": 1}, "metric": {"kind": "euclidean"},
                                   "segments": [], "extra": 1})"),
                  InvalidSpec);
  CHECK_THROWS_AS(parse_market(R"({"support": {"lo": 0, "hi": 1}, "metric": {"kind": "euclidean"},
                                   "segments": [{"beta": 1, "valuation": {"kind": "lognormal"}}]})"),
                  InvalidSpec);
  CHECK_THROWS_AS(parse_market(R"({"support": {"lo": 0, "hi": 1}, "metric": {"kind": "euclidean"},
                                   "segments": [{"beta": "half", "valuation": {"kind": "uniform"}}]})"),
                  InvalidSpec);
  CHECK_THROWS_AS(load_market("/nonexistent/market.json"), InvalidSpec);
}

TEST_CASE("markets round-trip through JSON") {
  std::mt19937_64 rng(8);
  for (int n = 0; n < 50; ++n) {
    const MarketSpec spec = n % 2 == 0 ? testing::random_continuous_market(rng, 3) : testing::random_discrete_market(rng, 5);
    const nlohmann::json once = market_to_json(spec);
    const nlohmann::json twice = market_to_json(market_from_json(once));
    CHECK(once == twice);
  }
}
