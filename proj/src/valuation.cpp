#include "fairprice/valuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <type_traits>

namespace fairprice {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double clamp01(double t) { return std::clamp(t, 0.0, 1.0); }

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

// Index of the knot segment [k, k+1] containing p; knots sorted by price.
std::size_t knot_segment(const std::vector<std::pair<double, double>>& knots, double p) {
  auto it = std::upper_bound(knots.begin(), knots.end(), p,
                             [](double x, const auto& knot) { return x < knot.first; });
  std::size_t idx = static_cast<std::size_t>(it - knots.begin());
  if (idx == 0) return 0;
  return std::min(idx - 1, knots.size() - 2);
}

double knot_slope(const std::vector<std::pair<double, double>>& knots, std::size_t k) {
  return (knots[k + 1].second - knots[k].second) / (knots[k + 1].first - knots[k].first);
}

}  // namespace

double Support::clamp(double p) const { return std::clamp(p, lo, hi); }

// ---------------------------------------------------------------------------
// DiscreteValuation

DiscreteValuation::DiscreteValuation(std::vector<double> values, std::vector<double> probs)
    : values_(std::move(values)), probs_(std::move(probs)) {
  const std::size_t n = std::min(values_.size(), probs_.size());
  tail_.assign(n + 1, 0.0);
  for (std::size_t k = n; k-- > 0;) tail_[k] = tail_[k + 1] + probs_[k];
}

double DiscreteValuation::survival(double p) const {
  const std::size_t n = tail_.size() - 1;
  auto it = std::lower_bound(values_.begin(), values_.begin() + static_cast<std::ptrdiff_t>(n), p);
  return tail_[static_cast<std::size_t>(it - values_.begin())];
}

double DiscreteValuation::revenue(double p) const {
  if (p <= 0.0) return 0.0;
  return p * survival(p);
}

std::vector<std::string> DiscreteValuation::check() const {
  std::vector<std::string> out;
  if (values_.empty()) out.emplace_back("discrete valuation has no values");
  if (values_.size() != probs_.size()) {
    out.emplace_back("discrete valuation has " + std::to_string(values_.size()) + " values but " +
                     std::to_string(probs_.size()) + " probabilities");
  }
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k]) || values_[k] < 0.0) {
      out.emplace_back("discrete value " + fmt_double(values_[k]) + " must be finite and >= 0");
    }
    if (k > 0 && !(values_[k] > values_[k - 1])) {
      out.emplace_back("discrete values must be strictly ascending");
      break;
    }
  }
  double sum = 0.0;
  for (double q : probs_) {
    if (!std::isfinite(q) || q < 0.0) out.emplace_back("probability " + fmt_double(q) + " < 0");
    sum += q;
  }
  if (!probs_.empty() && std::abs(sum - 1.0) > 1e-9) {
    out.emplace_back("probabilities sum to " + fmt_double(sum) + " != 1");
  }
  return out;
}

// ---------------------------------------------------------------------------
// ContinuousValuation

ContinuousValuation::ContinuousValuation(Support support, ContinuousFamily family)
    : support_(support), family_(std::move(family)) {}

std::string ContinuousValuation::kind() const {
  return std::visit(Overloaded{
                        [](const family::Uniform&) { return std::string("uniform"); },
                        [](const family::Power&) { return std::string("power"); },
                        [](const family::TruncatedExponential&) { return std::string("trunc-exp"); },
                        [](const family::TriangleRevenue&) { return std::string("triangle-revenue"); },
                        [](const family::EmpiricalCdf&) { return std::string("empirical-cdf"); },
                    },
                    family_);
}

double ContinuousValuation::cdf(double p) const {
  const double lo = support_.lo;
  const double hi = support_.hi;
  const double w = support_.width();
  if (p <= lo) return 0.0;
  if (p >= hi) return 1.0;
  return std::visit(
      Overloaded{
          [&](const family::Uniform&) { return clamp01((p - lo) / w); },
          [&](const family::Power& f) { return std::pow(clamp01((p - lo) / w), f.exponent); },
          [&](const family::TruncatedExponential& f) {
            return std::expm1(-f.rate * (p - lo)) / std::expm1(-f.rate * w);
          },
          [&](const family::TriangleRevenue& f) {
            const double r = p <= f.peak_price
                                 ? f.peak_revenue * (p - lo) / (f.peak_price - lo)
                                 : f.peak_revenue * (hi - p) / (hi - f.peak_price);
            return 1.0 - r / p;
          },
          [&](const family::EmpiricalCdf& f) {
            const auto& kn = f.knots;
            if (p <= kn.front().first) return kn.front().second;
            if (p >= kn.back().first) return kn.back().second;
            const std::size_t k = knot_segment(kn, p);
            return kn[k].second + knot_slope(kn, k) * (p - kn[k].first);
          },
      },
      family_);
}

double ContinuousValuation::revenue(double p) const {
  if (p <= 0.0) return 0.0;
  if (const auto* tri = std::get_if<family::TriangleRevenue>(&family_);
      tri != nullptr && p > support_.lo && p <= support_.hi) {
    if (p <= tri->peak_price) return tri->peak_revenue * (p - support_.lo) / (tri->peak_price - support_.lo);
    return tri->peak_revenue * (support_.hi - p) / (support_.hi - tri->peak_price);
  }
  return p * survival(p);
}

std::optional<double> ContinuousValuation::revenue_derivative(double p) const {
  const double lo = support_.lo;
  const double hi = support_.hi;
  const double w = support_.width();
  if (p < lo || p > hi) return std::nullopt;
  return std::visit(
      Overloaded{
          [&](const family::Uniform&) -> std::optional<double> { return (hi - 2.0 * p) / w; },
          [&](const family::Power& f) -> std::optional<double> {
            const double t = (p - lo) / w;
            const double k = f.exponent;
            if (t <= 0.0) {
              if (k > 1.0) return 1.0;
              if (k == 1.0) return 1.0 - p / w;
              return std::nullopt;
            }
            return 1.0 - std::pow(t, k) - p * k * std::pow(t, k - 1.0) / w;
          },
          [&](const family::TruncatedExponential& f) -> std::optional<double> {
            const double e = std::exp(-f.rate * (p - lo));
            const double c = std::exp(-f.rate * w);
            return ((e - c) - p * f.rate * e) / (1.0 - c);
          },
          [&](const family::TriangleRevenue& f) -> std::optional<double> {
            const double up = f.peak_revenue / (f.peak_price - lo);
            const double down = -f.peak_revenue / (hi - f.peak_price);
            if (p < f.peak_price) return up;
            if (p > f.peak_price) return down;
            return 0.5 * (up + down);
          },
          [&](const family::EmpiricalCdf& f) -> std::optional<double> {
            const auto& kn = f.knots;
            const double F = cdf(p);
            const std::size_t k = knot_segment(kn, p);
            double slope = knot_slope(kn, k);
            if (p == kn[k].first && k > 0) slope = 0.5 * (slope + knot_slope(kn, k - 1));
            if (p == kn[k + 1].first && k + 2 < kn.size()) slope = 0.5 * (slope + knot_slope(kn, k + 1));
            return 1.0 - F - p * slope;
          },
      },
      family_);
}

std::optional<double> ContinuousValuation::closed_form_optimum() const {
  return std::visit(Overloaded{
                        [&](const family::Uniform&) -> std::optional<double> {
                          return support_.clamp(0.5 * support_.hi);
                        },
                        [&](const family::Power& f) -> std::optional<double> {
                          if (support_.lo != 0.0) return std::nullopt;
                          return support_.hi * std::pow(f.exponent + 1.0, -1.0 / f.exponent);
                        },
                        [&](const family::TriangleRevenue& f) -> std::optional<double> {
                          return f.peak_price;
                        },
                        [](const auto&) -> std::optional<double> { return std::nullopt; },
                    },
                    family_);
}

double ContinuousValuation::sample(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  const double lo = support_.lo;
  const double hi = support_.hi;
  const double w = support_.width();
  return std::visit(
      Overloaded{
          [&](const family::Uniform&) { return lo + u * w; },
          [&](const family::Power& f) { return lo + w * std::pow(u, 1.0 / f.exponent); },
          [&](const family::TruncatedExponential& f) {
            return lo - std::log1p(u * std::expm1(-f.rate * w)) / f.rate;
          },
          [&](const family::TriangleRevenue& f) {
            // survival is R/P on (lo, P] and R(hi-p)/((hi-P)p) above P
            if (u >= f.peak_revenue / f.peak_price) return lo;
            return f.peak_revenue * hi / (f.peak_revenue + u * (hi - f.peak_price));
          },
          [&](const family::EmpiricalCdf& f) {
            const auto& kn = f.knots;
            for (std::size_t k = 0; k + 1 < kn.size(); ++k) {
              if (u < kn[k + 1].second && kn[k + 1].second > kn[k].second) {
                const double frac = (u - kn[k].second) / (kn[k + 1].second - kn[k].second);
                return kn[k].first + std::max(frac, 0.0) * (kn[k + 1].first - kn[k].first);
              }
            }
            return kn.back().first;
          },
      },
      family_);
}

std::vector<std::string> ContinuousValuation::check_parameters() const {
  std::vector<std::string> out;
  const double lo = support_.lo;
  const double hi = support_.hi;
  std::visit(
      Overloaded{
          [&](const family::Uniform&) {},
          [&](const family::Power& f) {
            if (!std::isfinite(f.exponent) || f.exponent <= 0.0) {
              out.emplace_back("power exponent must be finite and > 0");
            }
          },
          [&](const family::TruncatedExponential& f) {
            if (!std::isfinite(f.rate) || f.rate <= 0.0) {
              out.emplace_back("trunc-exp rate must be finite and > 0");
            }
          },
          [&](const family::TriangleRevenue& f) {
            if (!(f.peak_price > lo && f.peak_price < hi)) {
              out.emplace_back("triangle-revenue peak_price must lie strictly inside the support");
            }
            if (!(f.peak_revenue > 0.0) || !std::isfinite(f.peak_revenue)) {
              out.emplace_back("triangle-revenue peak_revenue must be > 0");
            } else if (f.peak_revenue > f.peak_price) {
              out.emplace_back("triangle-revenue peak_revenue cannot exceed peak_price");
            }
            if (lo != 0.0) out.emplace_back("triangle-revenue requires support lo = 0");
          },
          [&](const family::EmpiricalCdf& f) {
            const auto& kn = f.knots;
            if (kn.size() < 2) {
              out.emplace_back("empirical-cdf needs at least two knots");
              return;
            }
            for (std::size_t k = 0; k < kn.size(); ++k) {
              if (!std::isfinite(kn[k].first) || !std::isfinite(kn[k].second)) {
                out.emplace_back("empirical-cdf knots must be finite");
                return;
              }
              if (k > 0 && !(kn[k].first > kn[k - 1].first)) {
                out.emplace_back("empirical-cdf knot prices must be strictly ascending");
                return;
              }
            }
            if (std::abs(kn.front().first - lo) > kCdfTolerance ||
                std::abs(kn.back().first - hi) > kCdfTolerance) {
              out.emplace_back("empirical-cdf knots must span exactly the support");
            }
          },
      },
      family_);
  return out;
}

double ContinuousValuation::concavity_defect() const {
  const int n = kConcavitySamples;
  const double h = support_.width() / (n - 1);
  std::vector<double> r(n);
  for (int k = 0; k < n; ++k) r[k] = revenue(k == n - 1 ? support_.hi : support_.lo + k * h);
  double defect = -std::numeric_limits<double>::infinity();
  double prev = (r[1] - r[0]) / h;
  for (int k = 1; k + 1 < n; ++k) {
    const double slope = (r[k + 1] - r[k]) / h;
    defect = std::max(defect, slope - prev);
    prev = slope;
  }
  return defect;
}

std::vector<std::string> ContinuousValuation::check() const {
  std::vector<std::string> out = check_parameters();
  if (!out.empty()) return out;

  const int n = kConcavitySamples;
  const double h = support_.width() / (n - 1);
  if (std::abs(cdf(support_.lo)) > kCdfTolerance) out.emplace_back(kind() + ": F(lo) != 0");
  if (std::abs(cdf(support_.hi) - 1.0) > kCdfTolerance) out.emplace_back(kind() + ": F(hi) != 1");
  double prev = 0.0;
  for (int k = 0; k < n; ++k) {
    const double F = cdf(support_.lo + k * h);
    if (F < -kCdfTolerance || F > 1.0 + kCdfTolerance || F < prev - kCdfTolerance) {
      out.emplace_back(kind() + ": CDF is not a non-decreasing map into [0, 1] near p = " +
                       fmt_double(support_.lo + k * h));
      break;
    }
    prev = F;
  }
  if (out.empty()) {
    const double defect = concavity_defect();
    if (defect > kConcavitySlack) {
      out.emplace_back(kind() + ": revenue is not concave on the support (slope increase " +
                       fmt_double(defect) + ")");
    }
  }
  return out;
}

}  // namespace fairprice
