#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "fairprice/revenue.hpp"

namespace fairprice {

/// Locale-independent shortest form with 12 significant digits. Non-finite
/// values print as "inf", "-inf" or "nan".
std::string format_number(double value);

/// Report as a JSON object. Missing optionals become null; segment indices
/// are 0-based. Wall time is included only when asked for, so output stays
/// byte-identical across runs otherwise.
nlohmann::json report_to_json(const SolveReport& report, bool with_timing = false);

/// Cost of fairness recomputed from the revenue fields of a serialized report.
std::optional<double> cof_from_json(const nlohmann::json& report);

std::string report_csv_header(std::size_t segments);
std::string report_csv_row(const SolveReport& report);

/// Sweep rows: alpha, fp_revenue, ffp_revenue, cof, bound.
std::string sweep_csv_header();
std::string sweep_csv_row(const SolveReport& report);

}  // namespace fairprice
