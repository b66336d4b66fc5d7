#include "fairprice/report_io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>

namespace fairprice {

using nlohmann::json;

namespace {

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

template <class T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

std::string optional_csv(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

json report_to_json(const SolveReport& r, bool with_timing) {
  json j;
  j["method"] = std::string(to_string(r.method));
  j["alpha"] = r.alpha;
  j["fp_prices"] = r.fp_prices;
  j["fp_segment_revenues"] = r.fp_segment_revenues;
  j["fp_revenue"] = r.fp_revenue;
  j["ffp_prices"] = r.ffp_prices;
  j["ffp_revenue"] = optional_json(r.ffp_revenue);
  j["cof"] = optional_json(r.cof);
  j["cof_divergent"] = r.cof_divergent;
  j["cof_bound"] = r.cof_bound;
  if (r.fairness) {
    json f;
    f["fair"] = r.fairness->fair;
    f["max_excess"] = finite_or_null(r.fairness->max_excess);
    if (r.fairness->worst_pair) {
      f["worst_pair"] = {r.fairness->worst_pair->first, r.fairness->worst_pair->second};
    } else {
      f["worst_pair"] = nullptr;
    }
    j["fairness"] = f;
  } else {
    j["fairness"] = nullptr;
  }
  if (r.pivot) {
    j["pivot"] = *r.pivot;
    j["lower_bound"] = optional_json(r.lower_bound);
    j["gammas"] = r.gammas;
  }
  if (with_timing) {
    j["wall_time_ms"] = std::chrono::duration<double, std::milli>(r.wall_time).count();
  }
  return j;
}

std::optional<double> cof_from_json(const json& report) {
  const json& ffp = report.at("ffp_revenue");
  if (ffp.is_null()) return std::nullopt;
  return cost_of_fairness(report.at("fp_revenue").get<double>(), ffp.get<double>());
}

std::string report_csv_header(std::size_t segments) {
  std::string h = "method,alpha,fp_revenue,ffp_revenue,cof,cof_bound,fair";
  for (std::size_t i = 1; i <= segments; ++i) h += ",fp_price_" + std::to_string(i);
  for (std::size_t i = 1; i <= segments; ++i) h += ",ffp_price_" + std::to_string(i);
  return h;
}

std::string report_csv_row(const SolveReport& r) {
  std::string row = std::string(to_string(r.method)) + "," + format_number(r.alpha) + "," +
                    format_number(r.fp_revenue) + "," + optional_csv(r.ffp_revenue) + "," +
                    (r.cof_divergent ? std::string("inf") : optional_csv(r.cof)) + "," + format_number(r.cof_bound) +
                    "," + (r.fairness ? (r.fairness->fair ? "true" : "false") : "");
  for (double p : r.fp_prices) row += "," + format_number(p);
  for (double p : r.ffp_prices) row += "," + format_number(p);
  return row;
}

std::string sweep_csv_header() { return "alpha,fp_revenue,ffp_revenue,cof,bound"; }

std::string sweep_csv_row(const SolveReport& r) {
  return format_number(r.alpha) + "," + format_number(r.fp_revenue) + "," + optional_csv(r.ffp_revenue) + "," +
         (r.cof_divergent ? std::string("inf") : optional_csv(r.cof)) + "," + format_number(r.cof_bound);
}

}  // namespace fairprice
