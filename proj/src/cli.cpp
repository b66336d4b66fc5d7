#include "fairprice/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <limits>
#include <map>
#include <random>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "fairprice/convex_solver.hpp"
#include "fairprice/discrete_solver.hpp"
#include "fairprice/linp_solver.hpp"
#include "fairprice/market_io.hpp"
#include "fairprice/oracles.hpp"
#include "fairprice/report_io.hpp"

namespace fairprice::cli {

using nlohmann::json;

namespace {

constexpr double kGridTolerance = 1e-3;
constexpr int kProbesPerSegment = 200;

struct Options {
  std::string market_path;
  double alpha = 0.0;
  MethodChoice method = MethodChoice::kAuto;
  std::string format = "json";
  double alpha_min = 0.0;
  double alpha_max = 1.0;
  int steps = 11;
  std::uint64_t seed = 1;
  double resolution = 1e-4;
  bool timing = false;
};

std::string_view method_name(MethodChoice m) {
  switch (m) {
    case MethodChoice::kAuto: return "auto";
    case MethodChoice::kDiscrete: return "discrete";
    case MethodChoice::kConvex: return "convex";
    case MethodChoice::kLinP: return "linp";
  }
  return "auto";
}

json solved_to_json(const Solved& s, MethodChoice requested, bool timing) {
  json j = report_to_json(s.report, timing);
  j["requested_method"] = std::string(method_name(requested));
  if (s.cross_check) {
    j["cross_check"] = {
        {"method", std::string(to_string(s.cross_check->method))},
        {"ffp_revenue", s.cross_check->ffp_revenue ? json(*s.cross_check->ffp_revenue) : json(nullptr)},
        {"lower_bound", s.cross_check->lower_bound ? json(*s.cross_check->lower_bound) : json(nullptr)},
        {"winner", std::string(to_string(s.report.method))},
    };
  }
  return j;
}

int run_solve(const Options& o, std::ostream& out) {
  const MarketSpec spec = load_market(o.market_path);
  const Solved s = solve_with(spec, o.alpha, o.method);
  if (o.format == "csv") {
    out << report_csv_header(spec.size()) << '\n' << report_csv_row(s.report) << '\n';
  } else {
    out << solved_to_json(s, o.method, o.timing).dump(2) << '\n';
  }
  return kOk;
}

int run_sweep(const Options& o, std::ostream& out) {
  const MarketSpec spec = load_market(o.market_path);
  require_valid(spec);
  const std::vector<double> alphas = linspace(o.alpha_min, o.alpha_max, o.steps);
  std::vector<std::optional<Solved>> rows(alphas.size());
  std::vector<std::exception_ptr> errors(alphas.size());

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < alphas.size(); i = next++) {
      try {
        rows[i] = solve_with(spec, alphas[i], o.method);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t workers = sweep_threads(alphas.size());
  for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  if (o.format == "csv") {
    out << sweep_csv_header() << '\n';
    for (const auto& r : rows) out << sweep_csv_row(r->report) << '\n';
  } else {
    json arr = json::array();
    for (const auto& r : rows) arr.push_back(solved_to_json(*r, o.method, o.timing));
    out << arr.dump(2) << '\n';
  }
  return kOk;
}

// Random prices never beat the reported unconstrained optimum.
json probe_optimal_fp(const MarketSpec& spec, std::uint64_t seed, bool& ok) {
  const OptimalPricing fp = optimal_fp(spec);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> draw(spec.support.lo, spec.support.hi);
  double worst = -std::numeric_limits<double>::infinity();
  int count = 0;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    for (int n = 0; n < kProbesPerSegment; ++n, ++count) {
      const double gain = segment_revenue(spec.segments[i], draw(rng)) - fp.revenues[i];
      worst = std::max(worst, gain);
      if (gain > kFairnessTolerance * std::max(1.0, fp.revenues[i])) ok = false;
    }
  }
  return {{"seed", seed}, {"count", count}, {"max_gain", worst}};
}

int run_validate(const Options& o, std::ostream& out) {
  const MarketSpec spec = load_market(o.market_path);
  require_valid(spec);

  MethodChoice method = o.method;
  if (method == MethodChoice::kAuto) {
    if (spec.is_discrete()) {
      method = spec.size() == 2 ? MethodChoice::kDiscrete : MethodChoice::kLinP;
    } else {
      method = MethodChoice::kConvex;
    }
  }

  json j;
  j["method"] = std::string(method_name(method));
  j["alpha"] = o.alpha;
  double solver_value = 0.0;
  double oracle_value = 0.0;
  double deviation = 0.0;
  double tolerance = 0.0;

  switch (method) {
    case MethodChoice::kDiscrete: {
      const SolveReport r = solve_ffp_discrete(spec, o.alpha);
      const OracleResult ref = oracle_discrete_ffp(spec, o.alpha);
      j["oracle"] = "discrete-enumeration";
      solver_value = *r.ffp_revenue;
      oracle_value = ref.revenue;
      deviation = std::abs(solver_value - oracle_value);
      j["solver_prices"] = r.ffp_prices;
      j["oracle_prices"] = ref.prices;
      break;
    }
    case MethodChoice::kLinP: {
      const LinPInputs in = linp_inputs(spec, o.alpha);
      const LinPSolution sol = opt_linp_ffp(in);
      const PivotScanResult ref = oracle_pivot_scan(in);
      j["oracle"] = "pivot-scan";
      solver_value = sol.lower_bound;
      oracle_value = ref.value;
      deviation = std::abs(solver_value - oracle_value);
      j["solver_pivot"] = sol.pivot;
      j["oracle_pivot"] = ref.pivot;
      break;
    }
    case MethodChoice::kConvex: {
      if (!spec.is_continuous() || spec.size() > kGridOracleMaxSegments) {
        throw UnsupportedShape("no grid oracle for this market: it needs continuous valuations and at most " +
                               std::to_string(kGridOracleMaxSegments) + " segments");
      }
      const SolveReport r = solve_ffp_convex(spec, o.alpha);
      const OracleResult ref = oracle_grid_convex(spec, o.alpha, o.resolution);
      j["oracle"] = "grid";
      j["resolution"] = o.resolution;
      solver_value = *r.ffp_revenue;
      oracle_value = ref.revenue;
      deviation = std::max(0.0, oracle_value - solver_value);
      tolerance = kGridTolerance;
      j["solver_prices"] = r.ffp_prices;
      j["oracle_prices"] = ref.prices;
      break;
    }
    case MethodChoice::kAuto:
      break;
  }

  bool probes_ok = true;
  j["fp_probes"] = probe_optimal_fp(spec, o.seed, probes_ok);
  const bool passed = deviation <= tolerance && probes_ok;
  j["solver_value"] = solver_value;
  j["oracle_value"] = oracle_value;
  j["deviation"] = deviation;
  j["tolerance"] = tolerance;
  j["passed"] = passed;

  if (o.format == "csv") {
    out << "method,alpha,solver_value,oracle_value,deviation,tolerance,passed\n"
        << method_name(method) << ',' << format_number(o.alpha) << ',' << format_number(solver_value) << ','
        << format_number(oracle_value) << ',' << format_number(deviation) << ',' << format_number(tolerance) << ','
        << (passed ? "true" : "false") << '\n';
  } else {
    out << j.dump(2) << '\n';
  }
  return passed ? kOk : kDeviation;
}

int run_bound(const Options& o, std::ostream& out) {
  const MarketSpec spec = load_market(o.market_path);
  require_valid(spec);
  std::optional<double> min_d;
  double bound = 0.0;
  if (spec.size() >= 2) {
    const std::vector<double> d = min_distances(pairwise_distances(spec));
    min_d = *std::min_element(d.begin(), d.end());
    bound = cof_bound(o.alpha, d, spec.support);
  } else {
    bound = cof_bound(o.alpha, {}, spec.support);
  }
  if (o.format == "csv") {
    out << "alpha,min_distance,cof_bound\n"
        << format_number(o.alpha) << ',' << (min_d ? format_number(*min_d) : "") << ',' << format_number(bound)
        << '\n';
  } else {
    const json j = {{"alpha", o.alpha}, {"min_distance", min_d ? json(*min_d) : json(nullptr)}, {"cof_bound", bound}};
    out << j.dump(2) << '\n';
  }
  return kOk;
}

}  // namespace

Solved solve_with(const MarketSpec& spec, double alpha, MethodChoice method) {
  switch (method) {
    case MethodChoice::kDiscrete: return {solve_ffp_discrete(spec, alpha), std::nullopt};
    case MethodChoice::kConvex: return {solve_ffp_convex(spec, alpha), std::nullopt};
    case MethodChoice::kLinP: return {solve_ffp_linp(spec, alpha), std::nullopt};
    case MethodChoice::kAuto: break;
  }
  if (spec.is_discrete()) {
    if (spec.size() == 2) return {solve_ffp_discrete(spec, alpha), std::nullopt};
    return {solve_ffp_linp(spec, alpha), std::nullopt};
  }
  SolveReport convex = solve_ffp_convex(spec, alpha);
  SolveReport linp = solve_ffp_linp(spec, alpha);
  if (linp.ffp_revenue.value_or(0.0) > convex.ffp_revenue.value_or(0.0)) return {std::move(linp), std::move(convex)};
  return {std::move(convex), std::move(linp)};
}

std::vector<double> linspace(double lo, double hi, int steps) {
  if (steps < 2) throw std::invalid_argument("a sweep needs at least 2 steps");
  std::vector<double> out(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (steps - 1);
  out.back() = hi;
  return out;
}

std::size_t sweep_threads(std::size_t rows) {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("FAIRPRICE_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min(n, static_cast<std::size_t>(cap));
  }
  return std::max<std::size_t>(1, std::min(n, rows));
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal and fair feature-based pricing"};
  app.require_subcommand(1);
  Options o;

  const std::map<std::string, MethodChoice> methods{{"auto", MethodChoice::kAuto},
                                                    {"discrete", MethodChoice::kDiscrete},
                                                    {"convex", MethodChoice::kConvex},
                                                    {"linp", MethodChoice::kLinP}};
  auto common = [&](CLI::App* sub, bool with_alpha) {
    sub->add_option("--market", o.market_path, "Market specification (JSON)")->required();
    if (with_alpha) sub->add_option("--alpha", o.alpha, "Fairness parameter")->check(CLI::NonNegativeNumber);
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  };
  auto with_method = [&](CLI::App* sub) {
    sub->add_option("--method", o.method, "Solver")->transform(CLI::CheckedTransformer(methods));
  };

  CLI::App* solve = app.add_subcommand("solve", "Optimal fair prices for one alpha");
  common(solve, true);
  with_method(solve);
  solve->add_flag("--timing", o.timing, "Include wall time in JSON output");

  CLI::App* sweep = app.add_subcommand("sweep", "Cost of fairness over a range of alpha");
  common(sweep, false);
  with_method(sweep);
  sweep->add_option("--alpha-min", o.alpha_min, "First alpha")->check(CLI::NonNegativeNumber);
  sweep->add_option("--alpha-max", o.alpha_max, "Last alpha")->check(CLI::NonNegativeNumber);
  sweep->add_option("--steps", o.steps, "Number of alpha values")->check(CLI::Range(2, 1000000));
  sweep->add_flag("--timing", o.timing, "Include wall time in JSON output");

  CLI::App* validate = app.add_subcommand("validate", "Compare a solver against its brute-force oracle");
  common(validate, true);
  with_method(validate);
  validate->add_option("--seed", o.seed, "Seed for the random optimality probes");
  validate->add_option("--resolution", o.resolution, "Grid oracle resolution, relative to the support width")
      ->check(CLI::Range(1e-6, 1.0));

  CLI::App* bound = app.add_subcommand("bound", "Worst-case cost of fairness for a market");
  common(bound, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidInput;
  }

  try {
    if (*solve) return run_solve(o, out);
    if (*sweep) return run_sweep(o, out);
    if (*validate) return run_validate(o, out);
    if (*bound) return run_bound(o, out);
  } catch (const InvalidSpec& e) {
    err << "invalid market: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const UnsupportedShape& e) {
    err << "unsupported: " << e.what() << '\n';
    return kUnsupported;
  } catch (const ProjectionError& e) {
    err << "solver failure: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const std::invalid_argument& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kInvalidInput;
  }
  return kInvalidInput;
}

}  // namespace fairprice::cli
