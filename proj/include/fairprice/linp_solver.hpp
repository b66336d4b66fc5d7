#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "fairprice/revenue.hpp"

namespace fairprice {

/// What pivot-based pricing needs to know about a market: the unconstrained
/// optimal prices and revenues per segment, weights, nearest-neighbour
/// distances D_i and the support. Full distributions are not required.
struct LinPInputs {
  PriceVector p_hat;
  std::vector<double> pi_hat;
  std::vector<double> beta;
  std::vector<double> min_dist;  // D_i; +inf for a lone segment
  Support support;
  double alpha = 0.0;

  std::size_t size() const { return p_hat.size(); }
  /// Clamp radius tau_i = alpha * D_i / 2 (infinite when D_i is).
  double tau(std::size_t i) const {
    return std::isinf(min_dist[i]) ? min_dist[i] : 0.5 * alpha * min_dist[i];
  }
};

/// Builds inputs from a validated market (p-hat and pi-hat via optimal_fp).
LinPInputs linp_inputs(const MarketSpec& spec, double alpha);

/// Two-piece linear minorant of a concave revenue curve through (lo, 0),
/// (p_hat, pi_hat) and (hi, 0). A peak on the boundary collapses that side.
class LinearLowerBound {
 public:
  LinearLowerBound(double p_hat, double pi_hat, const Support& support)
      : p_hat_(p_hat), pi_hat_(pi_hat), support_(support) {}
  double operator()(double p) const;

 private:
  double p_hat_;
  double pi_hat_;
  Support support_;
};

inline LinearLowerBound linear_lower_bound(double p_hat, double pi_hat, const Support& support) {
  return {p_hat, pi_hat, support};
}

struct PivotPricing {
  PriceVector prices;
  std::vector<double> gammas;  // guaranteed revenue fractions, capped at 1
};

/// Clamps every p_hat_i into [m - tau_i, m + tau_i].
PivotPricing linp_prices(const LinPInputs& in, double pivot);

/// sum_i beta_i * gamma_i(m) * pi_hat_i, the linear lower bound on the revenue
/// of linp_prices(in, m).
double pivot_objective(const LinPInputs& in, double pivot);

/// Sorted breakpoints {p_hat_i +/- tau_i} within the support plus both
/// support endpoints. Points closer than 1e-12 * (|lo| + |hi|) are merged
/// into the lowest of them.
std::vector<double> critical_points(const LinPInputs& in);

/// Tie rule shared by the pivot search and its linear-scan oracle: a is at
/// least b up to 1e-12 relative rounding noise.
inline bool objective_at_least(double a, double b) {
  return a >= b - 1e-12 * std::max(std::abs(a), std::abs(b));
}

struct LinPSolution {
  double pivot = 0.0;
  PriceVector prices;
  std::vector<double> gammas;
  double lower_bound = 0.0;
  std::vector<double> critical_points;
  /// Objective sweeps over all K segments spent by the search.
  int probes = 0;
};

/// Optimal pivot by binary search over the critical points, returning the
/// lowest maximizing critical point. O(K log K) including the sort.
LinPSolution opt_linp_ffp(const LinPInputs& in);

/// Pivot-based fair prices with true revenues evaluated on the market.
SolveReport solve_ffp_linp(const MarketSpec& spec, double alpha);

/// Pivot-based fair prices when only peaks are known: ffp_revenue and cof are
/// left empty and lower_bound carries the certified revenue floor.
SolveReport solve_linp_from_peaks(const LinPInputs& in);

}  // namespace fairprice
