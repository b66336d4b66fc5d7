#include "fairprice/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace fairprice {

namespace {

// Range-maximum queries over a fixed array, answered in O(1).
class SparseMax {
 public:
  explicit SparseMax(std::vector<double> values) : values_(std::move(values)) {
    const std::size_t n = values_.size();
    levels_.emplace_back(n);
    for (std::size_t i = 0; i < n; ++i) levels_[0][i] = static_cast<int>(i);
    for (std::size_t span = 2; span <= n; span *= 2) {
      const auto& prev = levels_.back();
      std::vector<int> next(n - span + 1);
      for (std::size_t i = 0; i + span <= n; ++i) next[i] = better(prev[i], prev[i + span / 2]);
      levels_.push_back(std::move(next));
    }
  }

  // Index of the maximum over [a, b], lowest index on ties.
  int argmax(std::size_t a, std::size_t b) const {
    const std::size_t len = b - a + 1;
    const int level = std::bit_width(len) - 1;
    return better(levels_[level][a], levels_[level][b + 1 - (std::size_t{1} << level)]);
  }

  double operator[](std::size_t i) const { return values_[i]; }

 private:
  int better(int x, int y) const {
    if (values_[y] > values_[x] || (values_[y] == values_[x] && y < x)) return y;
    return x;
  }

  std::vector<double> values_;
  std::vector<std::vector<int>> levels_;
};

// Index range [first, last] of grid points within r of grid[c], allowing the
// fairness tolerance. Both ends always exist (c itself qualifies).
struct Window {
  std::vector<std::size_t> first;
  std::vector<std::size_t> last;
};

Window windows(const std::vector<double>& grid, double r) {
  const std::size_t n = grid.size();
  Window w{std::vector<std::size_t>(n), std::vector<std::size_t>(n)};
  std::size_t a = 0;
  std::size_t b = 0;
  for (std::size_t c = 0; c < n; ++c) {
    while (grid[c] - grid[a] - r > kFairnessTolerance) ++a;
    if (b < c) b = c;
    while (b + 1 < n && grid[b + 1] - grid[c] - r <= kFairnessTolerance) ++b;
    w.first[c] = a;
    w.last[c] = b;
  }
  return w;
}

}  // namespace

OracleResult oracle_discrete_ffp(const MarketSpec& spec, double alpha) {
  if (!spec.is_discrete() || spec.size() != 2) {
    throw UnsupportedShape("the discrete oracle handles two-segment discrete markets only");
  }
  require_valid(spec);
  const DistanceMatrix d = pairwise_distances(spec);
  const double r = alpha * d(0, 1);

  std::vector<double> grid;
  for (double v : std::get<DiscreteValuation>(spec.segments[0].valuation).values()) {
    grid.push_back(v);
    grid.push_back(v + r);
    grid.push_back(std::max(v - r, 0.0));
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  OracleResult best{{}, -std::numeric_limits<double>::infinity()};
  for (double a : grid) {
    for (double b : grid) {
      const PriceVector p{a, b};
      if (!is_alpha_fair(p, d, alpha).fair) continue;
      const double rev = total_revenue(spec, p);
      if (rev > best.revenue) best = {p, rev};
    }
  }
  return best;
}

OracleResult oracle_grid_convex(const MarketSpec& spec, double alpha, double resolution) {
  if (!spec.is_continuous() || spec.size() > kGridOracleMaxSegments) {
    throw UnsupportedShape("the grid oracle handles continuous markets with at most 3 segments");
  }
  if (!(resolution > 0.0 && resolution <= 1.0)) throw std::invalid_argument("resolution must lie in (0, 1]");
  require_valid(spec);

  const Support& s = spec.support;
  const auto steps = static_cast<std::size_t>(std::ceil(1.0 / resolution - 1e-9));
  std::vector<double> grid(steps + 1);
  for (std::size_t t = 0; t <= steps; ++t) {
    grid[t] = s.lo + s.width() * (static_cast<double>(t) / static_cast<double>(steps));
  }
  grid.back() = s.hi;

  const std::size_t k = spec.size();
  std::vector<std::vector<double>> rev(k, std::vector<double>(grid.size()));
  for (std::size_t i = 0; i < k; ++i) {
    const auto& seg = spec.segments[i];
    for (std::size_t t = 0; t < grid.size(); ++t) rev[i][t] = seg.beta * segment_revenue(seg, grid[t]);
  }

  OracleResult best{{}, -std::numeric_limits<double>::infinity()};
  if (k == 1) {
    const auto it = std::max_element(rev[0].begin(), rev[0].end());
    best = {{grid[static_cast<std::size_t>(it - rev[0].begin())]}, *it};
    return best;
  }

  const DistanceMatrix d = pairwise_distances(spec);
  const Window w01 = windows(grid, alpha * d(0, 1));
  const SparseMax last(rev[k - 1]);

  if (k == 2) {
    for (std::size_t a = 0; a < grid.size(); ++a) {
      const auto b = static_cast<std::size_t>(last.argmax(w01.first[a], w01.last[a]));
      const double value = rev[0][a] + last[b];
      if (value > best.revenue) best = {{grid[a], grid[b]}, value};
    }
    return best;
  }

  const Window w02 = windows(grid, alpha * d(0, 2));
  const Window w12 = windows(grid, alpha * d(1, 2));
  for (std::size_t a = 0; a < grid.size(); ++a) {
    for (std::size_t b = w01.first[a]; b <= w01.last[a]; ++b) {
      const std::size_t lo = std::max(w02.first[a], w12.first[b]);
      const std::size_t hi = std::min(w02.last[a], w12.last[b]);
      if (lo > hi) continue;
      const auto c = static_cast<std::size_t>(last.argmax(lo, hi));
      const double value = rev[0][a] + rev[1][b] + last[c];
      if (value > best.revenue) best = {{grid[a], grid[b], grid[c]}, value};
    }
  }
  return best;
}

PivotScanResult oracle_pivot_scan(const LinPInputs& in) {
  const std::vector<double> pts = critical_points(in);
  std::vector<double> values(pts.size());
  for (std::size_t z = 0; z < pts.size(); ++z) values[z] = pivot_objective(in, pts[z]);
  const double top = *std::max_element(values.begin(), values.end());
  for (std::size_t z = 0; z < pts.size(); ++z) {
    if (objective_at_least(values[z], top)) return {pts[z], values[z]};
  }
  return {pts.back(), values.back()};
}

}  // namespace fairprice
