#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "fairprice/valuation.hpp"

namespace fairprice {

/// Thrown when a market fails validation or cannot be parsed.
class InvalidSpec : public std::invalid_argument {
 public:
  explicit InvalidSpec(const std::string& what) : std::invalid_argument(what) {}
};

/// Thrown when a solver is asked to handle a market shape it does not cover.
class UnsupportedShape : public std::domain_error {
 public:
  explicit UnsupportedShape(const std::string& what) : std::domain_error(what) {}
};

/// Dense symmetric K x K matrix of pairwise segment distances.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t k, double fill = 0.0) : k_(k), d_(k * k, fill) {}
  DistanceMatrix(std::initializer_list<std::initializer_list<double>> rows);
  static DistanceMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const { return k_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * k_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return d_[i * k_ + j]; }

  bool operator==(const DistanceMatrix&) const = default;

 private:
  std::size_t k_ = 0;
  std::vector<double> d_;
};

struct Segment {
  std::vector<double> feature;
  double beta = 1.0;
  Valuation valuation;
};

struct Metric {
  enum class Kind { kEuclidean, kMatrix };
  Kind kind = Kind::kEuclidean;
  DistanceMatrix matrix;  // used when kind == kMatrix

  static Metric euclidean() { return {}; }
  static Metric explicit_matrix(DistanceMatrix d) { return {Kind::kMatrix, std::move(d)}; }
};

struct MarketSpec {
  Support support;
  std::vector<Segment> segments;
  Metric metric;

  std::size_t size() const { return segments.size(); }
  bool is_discrete() const;
  bool is_continuous() const;
  std::vector<double> betas() const;
};

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

/// Checks every structural invariant of the market and reports all
/// violations. Never throws.
ValidationReport validate(const MarketSpec& spec);

/// Throws InvalidSpec carrying the full report unless the market is valid.
void require_valid(const MarketSpec& spec);

/// d_ij for every pair of segments. Throws InvalidSpec when Euclidean
/// features disagree in dimension or the explicit matrix has the wrong shape.
DistanceMatrix pairwise_distances(const MarketSpec& spec);

/// D_i = min_{j != i} d_ij. Requires K >= 2 (throws UnsupportedShape).
std::vector<double> min_distances(const DistanceMatrix& d);

}  // namespace fairprice
