#include "fairprice/discrete_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace fairprice {

std::vector<CandidateSupport> candidate_supports(std::span<const double> values, double alpha_d12) {
  using Label = CandidateSupport::Label;
  std::vector<CandidateSupport> out;
  const std::size_t n = values.size();
  // A lone valuation: shifting either price away from it never helps.
  if (n == 1) return {{Label::kSingleValue, values[0], values[0]}};
  out.reserve(n * 5 + n * n);

  for (std::size_t a = 0; a < n; ++a) {
    out.push_back({Label::kSingleValue, values[a], values[a]});
    for (std::size_t b = 0; b < n; ++b) {
      if (b != a && std::abs(values[a] - values[b]) - alpha_d12 <= kFairnessTolerance) {
        out.push_back({Label::kValuePair, values[a], values[b]});
      }
    }
  }
  for (double v : values) {
    for (double shifted : {v + alpha_d12, std::max(v - alpha_d12, 0.0)}) {
      out.push_back({Label::kOffsetPair, v, shifted});
      out.push_back({Label::kOffsetPair, shifted, v});
    }
  }

  std::stable_sort(out.begin(), out.end(), [](const CandidateSupport& x, const CandidateSupport& y) {
    return x.p1 < y.p1 || (x.p1 == y.p1 && x.p2 < y.p2);
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const CandidateSupport& x, const CandidateSupport& y) {
                          return x.p1 == y.p1 && x.p2 == y.p2;
                        }),
            out.end());
  return out;
}

SolveReport solve_ffp_discrete(const MarketSpec& spec, double alpha) {
  const auto start = std::chrono::steady_clock::now();
  if (!spec.is_discrete() || spec.size() != 2) {
    throw UnsupportedShape("the discrete solver handles two-segment discrete markets only; "
                           "use the convex or linp method instead");
  }
  require_valid(spec);

  const OptimalPricing fp = optimal_fp(spec);
  const DistanceMatrix d = pairwise_distances(spec);
  PriceVector best = fp.prices;

  if (!is_alpha_fair(fp.prices, d, alpha).fair) {
    const auto& dv = std::get<DiscreteValuation>(spec.segments[0].valuation);
    const double alpha_d12 = alpha * d(0, 1);
    double best_revenue = -1.0;
    for (const auto& c : candidate_supports(dv.values(), alpha_d12)) {
      const PriceVector p{c.p1, c.p2};
      const double r = total_revenue(spec, p);
      if (r > best_revenue) {
        best_revenue = r;
        best = p;
      }
    }
  }

  SolveReport report = make_report(spec, Method::kDiscrete, alpha, fp, std::move(best));
  report.wall_time = std::chrono::steady_clock::now() - start;
  return report;
}

CaseCof cof_case_formula(double beta, double q1, double q2, double v1, double v2, double alpha_d12) {
  auto ratio = [&](double b, double q) -> std::optional<double> {
    const double num = b * v2 * (1.0 - q) + (1.0 - b) * v1;
    const double den = b * (v1 + alpha_d12) * (1.0 - q) + (1.0 - b) * v1;
    if (den == 0.0) return std::nullopt;
    return num / den;
  };
  return {ratio(beta, q1), ratio(1.0 - beta, q2)};
}

}  // namespace fairprice
