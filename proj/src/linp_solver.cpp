#include "fairprice/linp_solver.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <numeric>

namespace fairprice {

namespace {

// Revenue fraction guaranteed to segment i at pivot m.
double gamma_at(const LinPInputs& in, std::size_t i, double m) {
  const double p = in.p_hat[i];
  const double tau = in.tau(i);
  double g = 1.0;
  if (p - m >= tau) {
    const double den = p - in.support.lo;
    if (den > 0.0) g = (m - in.support.lo + tau) / den;
  } else if (m - p >= tau) {
    const double den = in.support.hi - p;
    if (den > 0.0) g = (in.support.hi - m + tau) / den;
  }
  return std::min(g, 1.0);
}

// Objective at two pivots in one pass over the segments; each sum is
// accumulated in the same order as pivot_objective so values match bitwise.
std::pair<double, double> objective_pair(const LinPInputs& in, double m1, double m2) {
  double s1 = 0.0;
  double s2 = 0.0;
  for (std::size_t i = 0; i < in.size(); ++i) {
    const double w = in.beta[i] * in.pi_hat[i];
    s1 += w * gamma_at(in, i, m1);
    s2 += w * gamma_at(in, i, m2);
  }
  return {s1, s2};
}

}  // namespace

LinPInputs linp_inputs(const MarketSpec& spec, double alpha) {
  require_valid(spec);
  const OptimalPricing fp = optimal_fp(spec);
  LinPInputs in;
  in.p_hat = fp.prices;
  in.pi_hat = fp.revenues;
  in.beta = spec.betas();
  in.min_dist = spec.size() >= 2 ? min_distances(pairwise_distances(spec))
                                 : std::vector<double>{std::numeric_limits<double>::infinity()};
  in.support = spec.support;
  in.alpha = alpha;
  return in;
}

double LinearLowerBound::operator()(double p) const {
  const double lo = support_.lo;
  const double hi = support_.hi;
  if (p < lo || p > hi) return 0.0;
  if (p <= p_hat_ && p_hat_ > lo) return pi_hat_ * (p - lo) / (p_hat_ - lo);
  if (p_hat_ < hi) return pi_hat_ * (hi - p) / (hi - p_hat_);
  return pi_hat_;
}

PivotPricing linp_prices(const LinPInputs& in, double pivot) {
  PivotPricing out;
  out.prices.resize(in.size());
  out.gammas.resize(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    const double p = in.p_hat[i];
    const double tau = in.tau(i);
    if (p - pivot >= tau) {
      out.prices[i] = pivot + tau;
    } else if (pivot - p >= tau) {
      out.prices[i] = pivot - tau;
    } else {
      out.prices[i] = p;
    }
    out.gammas[i] = gamma_at(in, i, pivot);
  }
  return out;
}

double pivot_objective(const LinPInputs& in, double pivot) {
  double sum = 0.0;
  for (std::size_t i = 0; i < in.size(); ++i) sum += in.beta[i] * in.pi_hat[i] * gamma_at(in, i, pivot);
  return sum;
}

std::vector<double> critical_points(const LinPInputs& in) {
  const double lo = in.support.lo;
  const double hi = in.support.hi;
  std::vector<double> m{lo, hi};
  m.reserve(2 * in.size() + 2);
  for (std::size_t i = 0; i < in.size(); ++i) {
    const double tau = in.tau(i);
    const double down = in.p_hat[i] - tau;
    const double up = in.p_hat[i] + tau;
    if (down > lo && down < hi) m.push_back(down);
    if (up > lo && up < hi) m.push_back(up);
  }
  std::sort(m.begin(), m.end());
  // Breakpoints that agree up to rounding (p_i - tau_i vs p_j + tau_j) are
  // one point; keeping both would create spurious ties in the search.
  const double merge = 1e-12 * (std::abs(lo) + std::abs(hi));
  m.erase(std::unique(m.begin(), m.end(), [merge](double a, double b) { return b - a <= merge; }), m.end());
  return m;
}

LinPSolution opt_linp_ffp(const LinPInputs& in) {
  LinPSolution sol;
  sol.critical_points = critical_points(in);
  const auto& pts = sol.critical_points;

  // Lowest index z whose successor does not improve on it. On a concave
  // sequence this predicate is monotone and z is the lowest maximizer.
  std::size_t left = 0;
  std::size_t right = pts.size() - 1;
  while (left < right) {
    const std::size_t mid = left + (right - left) / 2;
    const auto [here, next] = objective_pair(in, pts[mid], pts[mid + 1]);
    ++sol.probes;
    if (objective_at_least(here, next)) {
      right = mid;
    } else {
      left = mid + 1;
    }
  }

  sol.pivot = pts[left];
  sol.lower_bound = pivot_objective(in, sol.pivot);
  ++sol.probes;
  PivotPricing priced = linp_prices(in, sol.pivot);
  sol.prices = std::move(priced.prices);
  sol.gammas = std::move(priced.gammas);
  return sol;
}

SolveReport solve_ffp_linp(const MarketSpec& spec, double alpha) {
  const auto start = std::chrono::steady_clock::now();
  if (alpha < 0.0 || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be finite and >= 0");
  const LinPInputs in = linp_inputs(spec, alpha);
  LinPSolution sol = opt_linp_ffp(in);

  OptimalPricing fp{in.p_hat, in.pi_hat};
  SolveReport report = make_report(spec, Method::kLinP, alpha, fp, sol.prices);
  report.pivot = sol.pivot;
  report.lower_bound = sol.lower_bound;
  report.gammas = std::move(sol.gammas);
  report.wall_time = std::chrono::steady_clock::now() - start;
  return report;
}

SolveReport solve_linp_from_peaks(const LinPInputs& in) {
  const auto start = std::chrono::steady_clock::now();
  LinPSolution sol = opt_linp_ffp(in);

  SolveReport report;
  report.method = Method::kLinP;
  report.alpha = in.alpha;
  report.fp_prices = in.p_hat;
  report.fp_segment_revenues = in.pi_hat;
  report.fp_revenue = 0.0;
  for (std::size_t i = 0; i < in.size(); ++i) report.fp_revenue += in.beta[i] * in.pi_hat[i];
  report.ffp_prices = std::move(sol.prices);
  report.cof_bound = in.size() >= 2 ? cof_bound(in.alpha, in.min_dist, in.support)
                                    : cof_bound(in.alpha, {}, in.support);
  report.fairness.reset();
  report.pivot = sol.pivot;
  report.lower_bound = sol.lower_bound;
  report.gammas = std::move(sol.gammas);
  report.wall_time = std::chrono::steady_clock::now() - start;
  return report;
}

}  // namespace fairprice
