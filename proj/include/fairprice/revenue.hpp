#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "fairprice/market.hpp"

namespace fairprice {

/// One price per segment, in segment order.
using PriceVector = std::vector<double>;

/// Additive slack accepted by the fairness check.
inline constexpr double kFairnessTolerance = 1e-9;
/// Price tolerance of the golden-section searches on concave curves.
inline constexpr double kPriceTolerance = 1e-10;

double segment_revenue(const Valuation& valuation, double price);
inline double segment_revenue(const Segment& seg, double price) { return segment_revenue(seg.valuation, price); }

/// sum_k beta_k * revenue_k(p_k). Throws std::invalid_argument on a length mismatch.
double total_revenue(const MarketSpec& spec, std::span<const double> prices);

/// Maximizer of a unimodal function on [a, b]. Both endpoints are also
/// compared, so maxima sitting on the boundary are returned exactly.
double golden_section_max(const std::function<double(double)>& f, double a, double b,
                          double tol = kPriceTolerance);

/// Revenue-maximizing price of one segment. Discrete: best valuation, ties
/// to the lower price. Continuous: closed form when known, otherwise golden
/// section over the support.
double optimal_segment_price(const Valuation& valuation);

struct OptimalPricing {
  PriceVector prices;             // p-hat
  std::vector<double> revenues;   // pi-hat per segment
};

/// Unconstrained optimal feature-based prices.
OptimalPricing optimal_fp(const MarketSpec& spec);

struct FairnessCheck {
  bool fair = true;
  /// max over pairs of |p_i - p_j| - alpha * d_ij; -inf with fewer than two segments.
  double max_excess = 0.0;
  /// Pair (i < j) attaining max_excess.
  std::optional<std::pair<std::size_t, std::size_t>> worst_pair;
};

FairnessCheck is_alpha_fair(std::span<const double> prices, const DistanceMatrix& d, double alpha);

/// Pi(p-hat) / Pi(p). std::nullopt signals a divergent ratio (fair revenue 0).
std::optional<double> cost_of_fairness(double fp_revenue, double ffp_revenue);

/// 2 / (1 + min{alpha * min_i D_i / (hi - lo), 1}). An empty D (single
/// segment) leaves fairness vacuous, so only alpha = 0 keeps the factor 2.
double cof_bound(double alpha, std::span<const double> min_dist, const Support& support);

enum class Method { kDiscrete, kConvex, kLinP };
std::string_view to_string(Method m);

struct SolveReport {
  Method method = Method::kConvex;
  double alpha = 0.0;
  PriceVector fp_prices;
  std::vector<double> fp_segment_revenues;
  double fp_revenue = 0.0;
  PriceVector ffp_prices;
  /// Missing when only revenue peaks were supplied (LinP from peaks).
  std::optional<double> ffp_revenue;
  /// Missing when divergent or when ffp_revenue is unavailable.
  std::optional<double> cof;
  bool cof_divergent = false;
  double cof_bound = 2.0;
  /// Missing when the distance matrix is unknown (LinP from peaks).
  std::optional<FairnessCheck> fairness;
  // pivot-based pricing details
  std::optional<double> pivot;
  std::optional<double> lower_bound;
  std::vector<double> gammas;
  std::chrono::nanoseconds wall_time{0};
};

/// Fills revenues, CoF, bound and fairness certificate for a fair price
/// vector computed by some method.
SolveReport make_report(const MarketSpec& spec, Method method, double alpha, const OptimalPricing& fp,
                        PriceVector ffp_prices);

}  // namespace fairprice
