#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fairprice/revenue.hpp"

namespace fairprice {

struct CandidateSupport {
  enum class Label {
    kSingleValue,  // both segments pay the same valuation
    kValuePair,    // two distinct valuations already within alpha * d12
    kOffsetPair,   // one segment pays v_j, the other v_j +/- alpha * d12
  };
  Label label = Label::kSingleValue;
  double p1 = 0.0;
  double p2 = 0.0;
};

/// Fair price pairs that contain an optimal two-segment fair price pair.
///
/// Revenue is piecewise constant in each price with jumps only at
/// valuations, so an optimal pair has each price either at a valuation or
/// on the fairness boundary next to the other segment's valuation. The list
/// is deduplicated and ordered lexicographically by (p1, p2).
std::vector<CandidateSupport> candidate_supports(std::span<const double> values, double alpha_d12);

/// Optimal alpha-fair prices for a two-segment discrete market.
/// Throws UnsupportedShape unless the market is discrete with K = 2.
SolveReport solve_ffp_discrete(const MarketSpec& spec, double alpha);

struct CaseCof {
  std::optional<double> case3;  // segment 1 raised to v1 + alpha*d12, segment 2 at v1
  std::optional<double> case4;  // mirrored assignment
};

/// Closed-form CoF of the two boundary assignments for binary valuations
/// {v1 < v2}, with beta the weight of segment 1 and q_i = f_i(v1).
/// std::nullopt marks a zero denominator (divergent).
CaseCof cof_case_formula(double beta, double q1, double q2, double v1, double v2, double alpha_d12);

}  // namespace fairprice
