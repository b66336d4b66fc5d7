#pragma once

#include "fairprice/linp_solver.hpp"
#include "fairprice/revenue.hpp"

namespace fairprice {

// Brute-force references for the solvers. They share data types and the
// revenue/fairness primitives, never solver code paths.

struct OracleResult {
  PriceVector prices;
  double revenue = 0.0;
};

/// Every fair pair over {v_i} and {v_i +/- alpha*d12} (clipped at 0), best
/// revenue with ties to the lexicographically lowest pair. Two-segment
/// discrete markets only (UnsupportedShape otherwise).
OracleResult oracle_discrete_ffp(const MarketSpec& spec, double alpha);

/// Largest K the grid oracle accepts.
inline constexpr std::size_t kGridOracleMaxSegments = 3;

/// Full scan of the grid lo + (hi - lo) * t / N, N = ceil(1 / resolution),
/// keeping fair vectors only. Grids for resolutions 1/N and 1/(cN) are
/// nested, so the optimum never decreases as the resolution refines.
/// Continuous markets with K <= 3 only (UnsupportedShape otherwise).
OracleResult oracle_grid_convex(const MarketSpec& spec, double alpha, double resolution);

struct PivotScanResult {
  double pivot = 0.0;
  double value = 0.0;
};

/// pivot_objective at every critical point; lowest maximizer on ties.
PivotScanResult oracle_pivot_scan(const LinPInputs& in);

}  // namespace fairprice
