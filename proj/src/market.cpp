#include "fairprice/market.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fairprice {

namespace {

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

std::string pair_label(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

constexpr double kMetricTolerance = 1e-9;

void check_matrix(const DistanceMatrix& d, std::size_t k, std::vector<std::string>& out) {
  if (d.size() != k) {
    out.emplace_back("metric matrix is " + std::to_string(d.size()) + "x" + std::to_string(d.size()) +
                     " but the market has " + std::to_string(k) + " segments");
    return;
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (d(i, i) != 0.0) out.emplace_back("metric d_ii != 0 at segment " + std::to_string(i + 1));
    for (std::size_t j = i + 1; j < k; ++j) {
      if (!std::isfinite(d(i, j)) || d(i, j) < 0.0) {
        out.emplace_back("metric entry " + pair_label(i, j) + " must be finite and >= 0");
      }
      if (std::abs(d(i, j) - d(j, i)) > kMetricTolerance) {
        out.emplace_back("metric is not symmetric at " + pair_label(i, j));
      }
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      for (std::size_t m = 0; m < k; ++m) {
        if (m == i || m == j) continue;
        if (d(i, j) > d(i, m) + d(m, j) + kMetricTolerance) {
          out.emplace_back("triangle inequality " + pair_label(i, j) + " violated via segment " +
                           std::to_string(m + 1));
          break;
        }
      }
    }
  }
}

}  // namespace

DistanceMatrix::DistanceMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : k_(rows.size()), d_(rows.size() * rows.size(), 0.0) {
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != k_) throw InvalidSpec("distance matrix must be square");
    std::size_t j = 0;
    for (double v : row) d_[i * k_ + j++] = v;
    ++i;
  }
}

DistanceMatrix DistanceMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  DistanceMatrix d(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw InvalidSpec("distance matrix must be square");
    for (std::size_t j = 0; j < rows.size(); ++j) d(i, j) = rows[i][j];
  }
  return d;
}

bool MarketSpec::is_discrete() const {
  return !segments.empty() && std::all_of(segments.begin(), segments.end(), [](const Segment& s) {
           return std::holds_alternative<DiscreteValuation>(s.valuation);
         });
}

bool MarketSpec::is_continuous() const {
  return !segments.empty() && std::all_of(segments.begin(), segments.end(), [](const Segment& s) {
           return std::holds_alternative<ContinuousValuation>(s.valuation);
         });
}

std::vector<double> MarketSpec::betas() const {
  std::vector<double> out;
  out.reserve(segments.size());
  for (const auto& s : segments) out.push_back(s.beta);
  return out;
}

std::string ValidationReport::to_string() const {
  std::string out;
  for (const auto& v : violations) {
    out += v;
    out += '\n';
  }
  return out;
}

ValidationReport validate(const MarketSpec& spec) {
  ValidationReport report;
  auto& out = report.violations;

  const Support& sup = spec.support;
  const bool support_ok = std::isfinite(sup.lo) && std::isfinite(sup.hi) && sup.lo >= 0.0 && sup.lo < sup.hi;
  if (!support_ok) {
    out.emplace_back("support must satisfy 0 <= lo < hi with finite bounds (got [" + fmt_double(sup.lo) +
                     ", " + fmt_double(sup.hi) + "])");
  }

  const std::size_t k = spec.size();
  if (k == 0) {
    out.emplace_back("market has no segments");
    return report;
  }

  double beta_sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double b = spec.segments[i].beta;
    if (!(b > 0.0 && b <= 1.0)) {
      out.emplace_back("segment " + std::to_string(i + 1) + " beta = " + fmt_double(b) + " not in (0, 1]");
    }
    beta_sum += b;
  }
  if (std::abs(beta_sum - 1.0) > 1e-9) out.emplace_back("beta sum = " + fmt_double(beta_sum) + " != 1");

  if (!spec.is_discrete() && !spec.is_continuous()) {
    out.emplace_back("segments mix discrete and continuous valuations");
  } else if (spec.is_discrete()) {
    const auto& first = std::get<DiscreteValuation>(spec.segments.front().valuation);
    for (std::size_t i = 0; i < k; ++i) {
      const auto& dv = std::get<DiscreteValuation>(spec.segments[i].valuation);
      for (auto& msg : dv.check()) out.push_back("segment " + std::to_string(i + 1) + ": " + msg);
      if (!std::equal(dv.values().begin(), dv.values().end(), first.values().begin(), first.values().end())) {
        out.emplace_back("segment " + std::to_string(i + 1) + " does not share the common value set");
      }
    }
    if (support_ok) {
      for (double v : first.values()) {
        if (!sup.contains(v)) {
          out.emplace_back("discrete value " + fmt_double(v) + " lies outside the support");
          break;
        }
      }
    }
  } else {
    for (std::size_t i = 0; i < k; ++i) {
      const auto& cv = std::get<ContinuousValuation>(spec.segments[i].valuation);
      if (cv.support().lo != sup.lo || cv.support().hi != sup.hi) {
        out.emplace_back("segment " + std::to_string(i + 1) + " is not on the market support");
        continue;
      }
      if (!support_ok) continue;
      for (auto& msg : cv.check()) out.push_back("segment " + std::to_string(i + 1) + ": " + msg);
    }
  }

  if (spec.metric.kind == Metric::Kind::kMatrix) {
    check_matrix(spec.metric.matrix, k, out);
  } else {
    const std::size_t dim = spec.segments.front().feature.size();
    for (std::size_t i = 0; i < k; ++i) {
      const auto& x = spec.segments[i].feature;
      if (x.size() != dim) {
        out.emplace_back("feature dimension mismatch at segment " + std::to_string(i + 1));
        break;
      }
      if (!std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); })) {
        out.emplace_back("segment " + std::to_string(i + 1) + " has a non-finite feature");
      }
    }
  }
  return report;
}

void require_valid(const MarketSpec& spec) {
  const ValidationReport report = validate(spec);
  if (!report.ok()) throw InvalidSpec("invalid market:\n" + report.to_string());
}

DistanceMatrix pairwise_distances(const MarketSpec& spec) {
  const std::size_t k = spec.size();
  if (spec.metric.kind == Metric::Kind::kMatrix) {
    if (spec.metric.matrix.size() != k) throw InvalidSpec("metric matrix does not match the segment count");
    return spec.metric.matrix;
  }
  DistanceMatrix d(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto& xi = spec.segments[i].feature;
    for (std::size_t j = i + 1; j < k; ++j) {
      const auto& xj = spec.segments[j].feature;
      if (xi.size() != xj.size()) throw InvalidSpec("feature dimension mismatch between segments");
      double sq = 0.0;
      for (std::size_t t = 0; t < xi.size(); ++t) sq += (xi[t] - xj[t]) * (xi[t] - xj[t]);
      d(i, j) = d(j, i) = std::sqrt(sq);
    }
  }
  return d;
}

std::vector<double> min_distances(const DistanceMatrix& d) {
  const std::size_t k = d.size();
  if (k < 2) throw UnsupportedShape("nearest-neighbour distance needs at least two segments");
  std::vector<double> out(k, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (j != i) out[i] = std::min(out[i], d(i, j));
    }
  }
  return out;
}

}  // namespace fairprice
