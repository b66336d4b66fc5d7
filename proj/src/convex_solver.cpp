#include "fairprice/convex_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

namespace fairprice {

namespace {

struct Band {
  std::size_t i;
  std::size_t j;
  double width;  // alpha * d_ij
};

std::vector<Band> bands_of(const DistanceMatrix& d, double alpha) {
  std::vector<Band> out;
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = i + 1; j < d.size(); ++j) out.push_back({i, j, alpha * d(i, j)});
  }
  return out;
}

double max_violation(std::span<const double> x, const std::vector<Band>& bands, const Support& s) {
  double worst = 0.0;
  for (double v : x) worst = std::max({worst, s.lo - v, v - s.hi});
  for (const auto& b : bands) worst = std::max(worst, std::abs(x[b.i] - x[b.j]) - b.width);
  return worst;
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

// Exact line searches that never leave the feasible set and only accept
// strict improvements.
class Polisher {
 public:
  Polisher(const MarketSpec& spec, const DistanceMatrix& d, double alpha)
      : spec_(spec), d_(d), alpha_(alpha), tol_(1e-12 * spec.support.width()) {}

  // One sweep of single-price moves followed by grouped moves. Returns
  // whether any move was accepted.
  bool sweep(PriceVector& x) const {
    bool moved = false;
    const std::size_t k = x.size();
    const Support& s = spec_.support;

    for (std::size_t i = 0; i < k; ++i) {
      double a = s.lo;
      double b = s.hi;
      for (std::size_t j = 0; j < k; ++j) {
        if (j == i) continue;
        a = std::max(a, x[j] - alpha_ * d_(i, j));
        b = std::min(b, x[j] + alpha_ * d_(i, j));
      }
      if (!(a <= b)) continue;
      const auto& seg = spec_.segments[i];
      auto f = [&](double t) { return seg.beta * segment_revenue(seg, t); };
      const double t = golden_section_max(f, a, b, tol_);
      if (f(t) > f(x[i])) {
        x[i] = t;
        moved = true;
      }
    }

    UnionFind groups(k);
    const double tight = 1e-9 * s.width();
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        if (std::abs(x[i] - x[j]) >= alpha_ * d_(i, j) - tight) groups.unite(i, j);
      }
    }
    std::vector<std::vector<std::size_t>> members(k);
    for (std::size_t i = 0; i < k; ++i) members[groups.find(i)].push_back(i);

    for (const auto& group : members) {
      if (group.size() < 2) continue;
      const double base = x[group.front()];
      std::vector<double> offset;
      for (std::size_t m : group) offset.push_back(x[m] - base);

      double a = -std::numeric_limits<double>::infinity();
      double b = std::numeric_limits<double>::infinity();
      for (std::size_t g = 0; g < group.size(); ++g) {
        const std::size_t m = group[g];
        a = std::max(a, s.lo - offset[g]);
        b = std::min(b, s.hi - offset[g]);
        for (std::size_t j = 0; j < k; ++j) {
          if (std::find(group.begin(), group.end(), j) != group.end()) continue;
          a = std::max(a, x[j] - alpha_ * d_(m, j) - offset[g]);
          b = std::min(b, x[j] + alpha_ * d_(m, j) - offset[g]);
        }
      }
      if (!(a <= b)) continue;
      auto f = [&](double t) {
        double sum = 0.0;
        for (std::size_t g = 0; g < group.size(); ++g) {
          const auto& seg = spec_.segments[group[g]];
          sum += seg.beta * segment_revenue(seg, t + offset[g]);
        }
        return sum;
      };
      const double t = golden_section_max(f, a, b, tol_);
      if (f(t) > f(base)) {
        for (std::size_t g = 0; g < group.size(); ++g) x[group[g]] = t + offset[g];
        moved = true;
      }
    }
    return moved;
  }

 private:
  const MarketSpec& spec_;
  const DistanceMatrix& d_;
  double alpha_;
  double tol_;
};

}  // namespace

PriceVector project_fair(std::span<const double> prices, const DistanceMatrix& d, double alpha,
                         const Support& support, double tol, int max_passes) {
  const std::size_t k = prices.size();
  if (d.size() != k) throw std::invalid_argument("price vector and distance matrix disagree in size");
  PriceVector x(prices.begin(), prices.end());
  const std::vector<Band> bands = bands_of(d, alpha);
  if (max_violation(x, bands, support) <= 0.0) return x;

  // Dykstra increments: two entries per band, one per coordinate for the box.
  std::vector<double> band_inc(2 * bands.size(), 0.0);
  std::vector<double> box_inc(k, 0.0);
  PriceVector prev(k);

  double residual = 0.0;
  for (int pass = 0; pass < max_passes; ++pass) {
    prev = x;
    for (std::size_t e = 0; e < bands.size(); ++e) {
      const Band& b = bands[e];
      const double zi = x[b.i] + band_inc[2 * e];
      const double zj = x[b.j] + band_inc[2 * e + 1];
      double xi = zi;
      double xj = zj;
      const double diff = zi - zj;
      if (diff > b.width) {
        const double shift = 0.5 * (diff - b.width);
        xi -= shift;
        xj += shift;
      } else if (diff < -b.width) {
        const double shift = 0.5 * (-b.width - diff);
        xi += shift;
        xj -= shift;
      }
      band_inc[2 * e] = zi - xi;
      band_inc[2 * e + 1] = zj - xj;
      x[b.i] = xi;
      x[b.j] = xj;
    }
    for (std::size_t i = 0; i < k; ++i) {
      const double z = x[i] + box_inc[i];
      x[i] = support.clamp(z);
      box_inc[i] = z - x[i];
    }

    double change = 0.0;
    for (std::size_t i = 0; i < k; ++i) change = std::max(change, std::abs(x[i] - prev[i]));
    residual = max_violation(x, bands, support);
    if (residual < tol && change < tol) return x;
  }
  throw ProjectionError("fair projection did not converge; worst constraint residual " + std::to_string(residual),
                        residual);
}

double fd_revenue_derivative(const ContinuousValuation& v, double price) {
  const Support& s = v.support();
  const double h = 1e-6 * s.width();
  const double a = std::max(s.lo, price - h);
  const double b = std::min(s.hi, price + h);
  return (v.revenue(b) - v.revenue(a)) / (b - a);
}

double revenue_slope(const ContinuousValuation& v, double price) {
  if (auto g = v.revenue_derivative(price)) return *g;
  return fd_revenue_derivative(v, price);
}

SolveReport solve_ffp_convex(const MarketSpec& spec, double alpha, const ConvexSolveConfig& cfg, ConvexTrace* trace) {
  const auto start = std::chrono::steady_clock::now();
  if (!spec.is_continuous()) throw UnsupportedShape("the convex solver needs continuous valuations");
  require_valid(spec);
  if (alpha < 0.0 || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be finite and >= 0");

  const std::size_t k = spec.size();
  const Support& s = spec.support;
  const DistanceMatrix d = pairwise_distances(spec);
  const OptimalPricing fp = optimal_fp(spec);

  auto project = [&](std::span<const double> p) {
    return project_fair(p, d, alpha, s, cfg.projection_tol, cfg.max_projection_passes);
  };

  PriceVector x = project(fp.prices);
  PriceVector best = x;
  double best_value = total_revenue(spec, x);
  std::vector<double> history{best_value};

  const double step0 = cfg.step_scale * s.width();
  std::vector<double> grad(k);
  PriceVector y(k);
  int t = 1;
  for (; t <= cfg.max_iters; ++t) {
    double norm = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const auto& cv = std::get<ContinuousValuation>(spec.segments[i].valuation);
      grad[i] = spec.segments[i].beta * revenue_slope(cv, x[i]);
      norm += grad[i] * grad[i];
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) break;

    const double eta = step0 / std::sqrt(static_cast<double>(t));
    for (std::size_t i = 0; i < k; ++i) y[i] = x[i] + eta * grad[i] / norm;
    x = project(y);

    const double value = total_revenue(spec, x);
    if (value > best_value) {
      best_value = value;
      best = x;
    }
    history.push_back(best_value);
    if (t >= cfg.stall_window) {
      const double gain = best_value - history[history.size() - 1 - static_cast<std::size_t>(cfg.stall_window)];
      if (gain <= cfg.convergence_tol * std::max(std::abs(best_value), 1e-300)) break;
    }
  }

  int rounds = 0;
  if (cfg.polish) {
    const Polisher polisher(spec, d, alpha);
    while (rounds < 200 && polisher.sweep(best)) {
      ++rounds;
      history.push_back(std::max(history.back(), total_revenue(spec, best)));
    }
  }

  if (trace != nullptr) {
    trace->best_so_far = std::move(history);
    trace->iterations = std::min(t, cfg.max_iters);
    trace->polish_rounds = rounds;
  }

  SolveReport report = make_report(spec, Method::kConvex, alpha, fp, std::move(best));
  report.wall_time = std::chrono::steady_clock::now() - start;
  return report;
}

}  // namespace fairprice
