#include <doctest.h>

#include <cmath>
#include <random>

#include "fairprice/convex_solver.hpp"
#include "fairprice/valuation.hpp"
#include "support/random_markets.hpp"

using namespace fairprice;

TEST_CASE("discrete survival counts buyers at exactly the price") {
  const DiscreteValuation v({1.0, 2.0}, {0.6, 0.4});
  CHECK(v.check().empty());
  CHECK(v.survival(2.0) == doctest::Approx(0.4));
  CHECK(v.revenue(2.0) == doctest::Approx(0.8));
  CHECK(v.survival(1.0) == 1.0);
  CHECK(v.survival(1.5) == doctest::Approx(0.4));
  CHECK(v.survival(2.0000001) == 0.0);
  CHECK(v.revenue(0.0) == 0.0);
}

TEST_CASE("discrete structure errors are reported") {
  CHECK_FALSE(DiscreteValuation({2.0, 1.0}, {0.5, 0.5}).check().empty());
  CHECK_FALSE(DiscreteValuation({1.0, 2.0}, {1.2, -0.2}).check().empty());
  CHECK_FALSE(DiscreteValuation({1.0, 2.0}, {0.5, 0.6}).check().empty());
  CHECK_FALSE(DiscreteValuation({1.0, 2.0}, {1.0}).check().empty());
  CHECK_FALSE(DiscreteValuation({-1.0, 2.0}, {0.5, 0.5}).check().empty());
  CHECK(DiscreteValuation({1.0, 2.0}, {0.5, 0.5 + 5e-10}).check().empty());
}

TEST_CASE("uniform revenue and optimum") {
  const ContinuousValuation v({0.0, 1.0}, family::Uniform{});
  CHECK(v.check().empty());
  CHECK(v.revenue(0.5) == doctest::Approx(0.25));
  CHECK(v.revenue(0.0) == 0.0);
  CHECK(v.revenue(1.0) == 0.0);
  CHECK(*v.closed_form_optimum() == 0.5);

  // hi / 2 below the support clamps to lo
  const ContinuousValuation shifted({0.6, 1.0}, family::Uniform{});
  CHECK(*shifted.closed_form_optimum() == 0.6);
  CHECK(shifted.check().empty());
}

TEST_CASE("power family closed-form optimum") {
  const ContinuousValuation v({0.0, 1.0}, family::Power{2.0});
  CHECK(v.revenue(0.5) == doctest::Approx(0.5 * 0.75));
  CHECK(*v.closed_form_optimum() == doctest::Approx(1.0 / std::sqrt(3.0)));
  const ContinuousValuation w({0.0, 3.0}, family::Power{1.0});
  CHECK(*w.closed_form_optimum() == doctest::Approx(1.5));
}

TEST_CASE("triangle-revenue places the residual mass at zero") {
  const ContinuousValuation v({0.0, 1.0}, family::TriangleRevenue{0.9, 0.5});
  CHECK(v.check().empty());
  CHECK(v.revenue(0.9) == doctest::Approx(0.5));
  CHECK(v.revenue(0.45) == doctest::Approx(0.25));
  CHECK(v.revenue(0.95) == doctest::Approx(0.25));
  CHECK(v.survival(0.0) == 1.0);
  CHECK(v.survival(1e-12) == doctest::Approx(0.5 / 0.9));
  CHECK(*v.closed_form_optimum() == 0.9);

  CHECK_FALSE(ContinuousValuation({0.0, 1.0}, family::TriangleRevenue{0.5, 0.6}).check().empty());
  CHECK_FALSE(ContinuousValuation({0.1, 1.0}, family::TriangleRevenue{0.5, 0.2}).check().empty());
}

TEST_CASE("truncated exponential is concave only while rate * hi <= 2") {
  CHECK(ContinuousValuation({0.0, 1.0}, family::TruncatedExponential{1.5}).check().empty());
  const auto problems = ContinuousValuation({0.0, 1.0}, family::TruncatedExponential{6.0}).check();
  REQUIRE_FALSE(problems.empty());
  CHECK(problems.front().find("concave") != std::string::npos);
}

TEST_CASE("empirical CDF: knots must span the support and keep revenue concave") {
  family::EmpiricalCdf convex{{{0.0, 0.0}, {0.5, 0.25}, {1.0, 1.0}}};
  CHECK(ContinuousValuation({0.0, 1.0}, convex).check().empty());
  CHECK(ContinuousValuation({0.0, 1.0}, convex).cdf(0.75) == doctest::Approx(0.625));

  family::EmpiricalCdf concave_cdf{{{0.0, 0.0}, {0.5, 0.9}, {1.0, 1.0}}};
  CHECK_FALSE(ContinuousValuation({0.0, 1.0}, concave_cdf).check().empty());

  family::EmpiricalCdf short_span{{{0.0, 0.0}, {0.8, 1.0}}};
  CHECK_FALSE(ContinuousValuation({0.0, 1.0}, short_span).check().empty());

  family::EmpiricalCdf decreasing{{{0.0, 0.0}, {0.5, 0.6}, {0.7, 0.4}, {1.0, 1.0}}};
  CHECK_FALSE(ContinuousValuation({0.0, 1.0}, decreasing).check().empty());
}

TEST_CASE("CDF endpoints and monotonicity on random families") {
  std::mt19937_64 rng(11);
  for (int n = 0; n < 200; ++n) {
    const Support s = testing::random_support(rng);
    const ContinuousValuation v = testing::random_continuous(rng, s);
    CHECK(std::abs(v.cdf(s.lo)) <= 1e-9);
    CHECK(std::abs(v.cdf(s.hi) - 1.0) <= 1e-9);
    double prev = -1.0;
    for (int t = 0; t <= 100; ++t) {
      const double F = v.cdf(s.lo + s.width() * t / 100.0);
      CHECK(F >= prev - 1e-12);
      prev = F;
    }
    CHECK(v.concavity_defect() <= ContinuousValuation::kConcavitySlack);
  }
}

TEST_CASE("revenue matches Monte Carlo within three standard errors") {
  std::mt19937_64 rng(2024);
  constexpr int kDraws = 1'000'000;
  for (int n = 0; n < 6; ++n) {
    const Support s = testing::random_support(rng);
    const ContinuousValuation v = testing::random_continuous(rng, s);
    const double p = s.lo + testing::uniform(rng, 0.1, 0.9) * s.width();
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < kDraws; ++i) {
      const double x = v.sample(rng) >= p ? p : 0.0;
      sum += x;
      sum_sq += x * x;
    }
    const double mean = sum / kDraws;
    const double se = std::sqrt((sum_sq / kDraws - mean * mean) / kDraws);
    INFO(v.kind() << " at p = " << p);
    CHECK(std::abs(mean - v.revenue(p)) <= 3.0 * se + 1e-12);
  }
  // the uniform example directly
  const ContinuousValuation u({0.0, 1.0}, family::Uniform{});
  double hits = 0.0;
  for (int i = 0; i < kDraws; ++i) hits += u.sample(rng) >= 0.5 ? 1.0 : 0.0;
  const double mean = 0.5 * hits / kDraws;
  CHECK(std::abs(mean - 0.25) <= 3.0 * std::sqrt(0.25 * 0.25 / kDraws));
}

TEST_CASE("samples stay inside the support") {
  std::mt19937_64 rng(5);
  for (int n = 0; n < 50; ++n) {
    const Support s = testing::random_support(rng);
    const ContinuousValuation v = testing::random_continuous(rng, s);
    for (int i = 0; i < 200; ++i) {
      const double x = v.sample(rng);
      CHECK(x >= s.lo);
      CHECK(x <= s.hi);
    }
  }
}

TEST_CASE("analytic revenue slopes agree with finite differences") {
  const Support unit{0.0, 1.0};
  const Support wide{0.5, 3.0};
  const std::vector<ContinuousValuation> families{
      {unit, family::Uniform{}},
      {wide, family::Uniform{}},
      {unit, family::Power{2.0}},
      {unit, family::Power{0.5}},
      {{0.0, 2.0}, family::Power{3.0}},
      {unit, family::TruncatedExponential{1.0}},
      {{0.0, 4.0}, family::TruncatedExponential{0.3}},
      {unit, family::TriangleRevenue{0.7, 0.4}},
  };
  for (const auto& v : families) {
    const Support& s = v.support();
    for (int t = 1; t < 20; ++t) {
      const double p = s.lo + s.width() * t / 20.0;
      if (std::holds_alternative<family::TriangleRevenue>(v.family()) && std::abs(p - 0.7) < 0.06) continue;
      const auto exact = v.revenue_derivative(p);
      REQUIRE(exact.has_value());
      const double fd = fd_revenue_derivative(v, p);
      INFO(v.kind() << " at p = " << p);
      CHECK(std::abs(fd - *exact) <= 1e-5 * std::max(1.0, std::abs(*exact)));
    }
  }
}
