#include "fairprice/revenue.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fairprice {

double segment_revenue(const Valuation& valuation, double price) {
  return std::visit([price](const auto& v) { return v.revenue(price); }, valuation);
}

double total_revenue(const MarketSpec& spec, std::span<const double> prices) {
  if (prices.size() != spec.size()) {
    throw std::invalid_argument("price vector has " + std::to_string(prices.size()) + " entries for " +
                                std::to_string(spec.size()) + " segments");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < prices.size(); ++k) {
    sum += spec.segments[k].beta * segment_revenue(spec.segments[k], prices[k]);
  }
  return sum;
}

double golden_section_max(const std::function<double(double)>& f, double a, double b, double tol) {
  if (!(b > a)) return a;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  double best = f1 >= f2 ? x1 : x2;
  double fbest = std::max(f1, f2);
  // endpoints of the final bracket catch maxima on a kink or the boundary
  for (double x : {a, b}) {
    const double fx = f(x);
    if (fx > fbest) {
      best = x;
      fbest = fx;
    }
  }
  return best;
}

double optimal_segment_price(const Valuation& valuation) {
  if (const auto* dv = std::get_if<DiscreteValuation>(&valuation)) {
    double best_p = dv->values().front();
    double best_r = dv->revenue(best_p);
    for (double v : dv->values()) {
      const double r = dv->revenue(v);
      if (r > best_r) {
        best_r = r;
        best_p = v;
      }
    }
    return best_p;
  }
  const auto& cv = std::get<ContinuousValuation>(valuation);
  if (auto p = cv.closed_form_optimum()) return *p;
  const Support& s = cv.support();
  const double p = golden_section_max([&cv](double x) { return cv.revenue(x); }, s.lo, s.hi);
  double best = p;
  for (double edge : {s.lo, s.hi}) {
    if (cv.revenue(edge) > cv.revenue(best)) best = edge;
  }
  return best;
}

OptimalPricing optimal_fp(const MarketSpec& spec) {
  OptimalPricing out;
  out.prices.reserve(spec.size());
  out.revenues.reserve(spec.size());
  for (const auto& seg : spec.segments) {
    const double p = optimal_segment_price(seg.valuation);
    out.prices.push_back(p);
    out.revenues.push_back(segment_revenue(seg, p));
  }
  return out;
}

FairnessCheck is_alpha_fair(std::span<const double> prices, const DistanceMatrix& d, double alpha) {
  if (d.size() != prices.size()) throw std::invalid_argument("price vector and distance matrix disagree in size");
  FairnessCheck out;
  out.max_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < prices.size(); ++i) {
    for (std::size_t j = i + 1; j < prices.size(); ++j) {
      const double excess = std::abs(prices[i] - prices[j]) - alpha * d(i, j);
      if (excess > out.max_excess) {
        out.max_excess = excess;
        out.worst_pair = std::make_pair(i, j);
      }
    }
  }
  out.fair = !(out.max_excess > kFairnessTolerance);
  return out;
}

std::optional<double> cost_of_fairness(double fp_revenue, double ffp_revenue) {
  if (!(ffp_revenue > 0.0)) return std::nullopt;
  return fp_revenue / ffp_revenue;
}

double cof_bound(double alpha, std::span<const double> min_dist, const Support& support) {
  double ratio = 0.0;
  if (alpha > 0.0) {
    if (min_dist.empty()) {
      ratio = 1.0;
    } else {
      const double dmin = *std::min_element(min_dist.begin(), min_dist.end());
      ratio = std::min(alpha * dmin / support.width(), 1.0);
    }
  }
  return 2.0 / (1.0 + ratio);
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::kDiscrete:
      return "discrete";
    case Method::kConvex:
      return "convex";
    case Method::kLinP:
      return "linp";
  }
  return "unknown";
}

SolveReport make_report(const MarketSpec& spec, Method method, double alpha, const OptimalPricing& fp,
                        PriceVector ffp_prices) {
  SolveReport r;
  r.method = method;
  r.alpha = alpha;
  r.fp_prices = fp.prices;
  r.fp_segment_revenues = fp.revenues;
  r.fp_revenue = total_revenue(spec, fp.prices);
  r.ffp_revenue = total_revenue(spec, ffp_prices);
  r.cof = cost_of_fairness(r.fp_revenue, *r.ffp_revenue);
  r.cof_divergent = !r.cof.has_value();
  const DistanceMatrix d = pairwise_distances(spec);
  r.fairness = is_alpha_fair(ffp_prices, d, alpha);
  r.cof_bound = spec.size() >= 2 ? cof_bound(alpha, min_distances(d), spec.support)
                                 : cof_bound(alpha, {}, spec.support);
  r.ffp_prices = std::move(ffp_prices);
  return r;
}

}  // namespace fairprice
