#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fairprice/revenue.hpp"

namespace fairprice::cli {

enum ExitCode : int {
  kOk = 0,
  kDeviation = 1,    // validate: solver and oracle disagree beyond tolerance
  kInvalidInput = 2, // unreadable, malformed or invalid market; bad arguments
  kUnsupported = 3,  // method/shape combination or oracle not applicable
  kSolverFailure = 4,
};

enum class MethodChoice { kAuto, kDiscrete, kConvex, kLinP };

struct Solved {
  SolveReport report;
  /// For continuous markets under auto: the LinP answer the convex result
  /// was checked against.
  std::optional<SolveReport> cross_check;
};

/// Routes a market to a solver. Auto: two-segment discrete -> discrete
/// solver; other discrete -> LinP; continuous -> convex, cross-checked with
/// LinP, keeping the higher revenue (convex on ties).
Solved solve_with(const MarketSpec& spec, double alpha, MethodChoice method);

/// steps evenly spaced values from lo to hi inclusive (steps >= 2).
std::vector<double> linspace(double lo, double hi, int steps);

/// Worker count for a sweep: hardware concurrency, capped by the
/// FAIRPRICE_THREADS environment variable and by the number of rows.
std::size_t sweep_threads(std::size_t rows);

/// Full command-line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fairprice::cli
