#pragma once

#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace fairprice {

/// Common valuation support [lo, hi]. `lo` doubles as the marginal cost
/// (lowest admissible price) and `hi` is the largest consumer valuation.
struct Support {
  double lo = 0.0;
  double hi = 1.0;

  double width() const { return hi - lo; }
  double clamp(double p) const;
  bool contains(double p) const { return p >= lo && p <= hi; }
};

/// Finite valuation set with a probability mass function.
///
/// A consumer buys iff valuation >= price, so survival(p) is the mass on
/// values v >= p. Survival masses are precomputed as suffix sums so that
/// every caller sees bitwise-identical revenues for the same price.
class DiscreteValuation {
 public:
  DiscreteValuation() = default;
  DiscreteValuation(std::vector<double> values, std::vector<double> probs);

  std::span<const double> values() const { return values_; }
  std::span<const double> probs() const { return probs_; }
  std::size_t size() const { return values_.size(); }

  /// P(V >= p).
  double survival(double p) const;
  /// p * P(V >= p).
  double revenue(double p) const;

  /// Structural problems (ordering, negative mass, sum != 1). Empty if fine.
  std::vector<std::string> check() const;

 private:
  std::vector<double> values_;
  std::vector<double> probs_;
  std::vector<double> tail_;  // tail_[k] = sum_{j >= k} probs_[j], tail_[n] = 0
};

namespace family {

struct Uniform {};

/// F(p) = t^k with t = (p - lo) / (hi - lo).
struct Power {
  double exponent = 1.0;
};

/// Exponential with the given rate, truncated to the support.
struct TruncatedExponential {
  double rate = 1.0;
};

/// Distribution whose revenue curve is the triangle through (lo, 0),
/// (peak_price, peak_revenue) and (hi, 0). Needs lo == 0; the mass
/// 1 - peak_revenue / peak_price sits at zero.
struct TriangleRevenue {
  double peak_price = 0.5;
  double peak_revenue = 0.25;
};

/// Piecewise-linear CDF through (price, F(price)) knots.
struct EmpiricalCdf {
  std::vector<std::pair<double, double>> knots;
};

}  // namespace family

using ContinuousFamily = std::variant<family::Uniform, family::Power, family::TruncatedExponential,
                                      family::TriangleRevenue, family::EmpiricalCdf>;

/// Continuous valuation distribution on a Support.
///
/// cdf(p) is P(V < p), so survival(p) = 1 - cdf(p) counts an atom at p as
/// buyers. Families must produce a concave revenue curve on the support;
/// check() verifies that numerically together with the CDF shape.
class ContinuousValuation {
 public:
  ContinuousValuation(Support support, ContinuousFamily family);

  const Support& support() const { return support_; }
  const ContinuousFamily& family() const { return family_; }
  std::string kind() const;

  double cdf(double p) const;
  double survival(double p) const { return 1.0 - cdf(p); }
  double revenue(double p) const;

  /// d/dp revenue where the family has a closed form. At kinks this is the
  /// midpoint of the one-sided derivatives, which is a valid supergradient.
  std::optional<double> revenue_derivative(double p) const;

  /// Closed-form revenue-maximizing price, if one is known for this family.
  std::optional<double> closed_form_optimum() const;

  /// Inverse-CDF draw.
  double sample(std::mt19937_64& rng) const;

  /// Parameter, CDF-shape and concavity problems. Empty if fine.
  std::vector<std::string> check() const;

  /// Largest increase between successive slopes of revenue sampled at
  /// 1001 equispaced points; the curve is certified concave when this is
  /// at most kConcavitySlack.
  double concavity_defect() const;

  static constexpr int kConcavitySamples = 1001;
  static constexpr double kConcavitySlack = 1e-7;
  static constexpr double kCdfTolerance = 1e-9;

 private:
  std::vector<std::string> check_parameters() const;

  Support support_;
  ContinuousFamily family_;
};

using Valuation = std::variant<DiscreteValuation, ContinuousValuation>;

}  // namespace fairprice
