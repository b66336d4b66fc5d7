#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fairprice/revenue.hpp"

namespace fairprice {

struct ConvexSolveConfig {
  int max_iters = 100000;
  /// Step length at iteration t is step_scale * (hi - lo) / sqrt(t) along the
  /// normalized supergradient.
  double step_scale = 0.1;
  /// Stop when the best objective gains less than this (relative) over
  /// stall_window iterations.
  double convergence_tol = 1e-8;
  int stall_window = 100;
  double projection_tol = 1e-10;
  int max_projection_passes = 100000;
  /// Finish with exact one-dimensional line searches over single prices and
  /// over groups of prices tied by active constraints.
  bool polish = true;
};

class ProjectionError : public std::runtime_error {
 public:
  ProjectionError(const std::string& what, double residual) : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Euclidean projection onto {|p_i - p_j| <= alpha * d_ij for all pairs} intersected
/// with the box [lo, hi]^K, by Dykstra's alternating projections. Feasible
/// inputs are returned unchanged.
PriceVector project_fair(std::span<const double> prices, const DistanceMatrix& d, double alpha,
                         const Support& support, double tol = 1e-10, int max_passes = 100000);

/// Central finite-difference revenue slope with h = 1e-6 * (hi - lo),
/// one-sided at the support edges.
double fd_revenue_derivative(const ContinuousValuation& v, double price);

/// Revenue slope: analytic where the family has one, finite differences otherwise.
double revenue_slope(const ContinuousValuation& v, double price);

struct ConvexTrace {
  std::vector<double> best_so_far;  // one entry per ascent iteration, then per polish round
  int iterations = 0;
  int polish_rounds = 0;
};

/// Optimal alpha-fair prices for a continuous market with concave revenues:
/// projected supergradient ascent from the projected unconstrained optimum,
/// keeping the best iterate. Throws UnsupportedShape for discrete markets and
/// InvalidSpec for markets failing validation.
SolveReport solve_ffp_convex(const MarketSpec& spec, double alpha, const ConvexSolveConfig& cfg = {},
                             ConvexTrace* trace = nullptr);

}  // namespace fairprice
