#include "fairprice/market_io.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

namespace fairprice {

using nlohmann::json;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void expect_object(const json& j, std::string_view where) {
  if (!j.is_object()) throw InvalidSpec(std::string(where) + " must be a JSON object");
}

void reject_unknown(const json& j, std::string_view where, std::initializer_list<std::string_view> allowed) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || item.key() == a;
    if (!known) throw InvalidSpec("unknown key '" + item.key() + "' in " + std::string(where));
  }
}

const json& require(const json& j, const char* key, std::string_view where) {
  auto it = j.find(key);
  if (it == j.end()) throw InvalidSpec("missing key '" + std::string(key) + "' in " + std::string(where));
  return *it;
}

double number(const json& j, std::string_view what) {
  if (!j.is_number()) throw InvalidSpec(std::string(what) + " must be a number");
  return j.get<double>();
}

std::vector<double> numbers(const json& j, std::string_view what) {
  if (!j.is_array()) throw InvalidSpec(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(number(v, what));
  return out;
}

Valuation valuation_from_json(const json& j, const Support& support, const std::string& where) {
  expect_object(j, where);
  const json& kind_j = require(j, "kind", where);
  if (!kind_j.is_string()) throw InvalidSpec(where + ".kind must be a string");
  const std::string kind = kind_j.get<std::string>();

  if (kind == "discrete") {
    reject_unknown(j, where, {"kind", "values", "probs"});
    return DiscreteValuation(numbers(require(j, "values", where), where + ".values"),
                             numbers(require(j, "probs", where), where + ".probs"));
  }
  if (kind == "uniform") {
    reject_unknown(j, where, {"kind"});
    return ContinuousValuation(support, family::Uniform{});
  }
  if (kind == "power") {
    reject_unknown(j, where, {"kind", "exponent"});
    return ContinuousValuation(support, family::Power{number(require(j, "exponent", where), "exponent")});
  }
  if (kind == "trunc-exp") {
    reject_unknown(j, where, {"kind", "rate"});
    return ContinuousValuation(support, family::TruncatedExponential{number(require(j, "rate", where), "rate")});
  }
  if (kind == "triangle-revenue") {
    reject_unknown(j, where, {"kind", "peak_price", "peak_revenue"});
    return ContinuousValuation(support, family::TriangleRevenue{number(require(j, "peak_price", where), "peak_price"),
                                                                number(require(j, "peak_revenue", where),
                                                                       "peak_revenue")});
  }
  if (kind == "empirical-cdf") {
    reject_unknown(j, where, {"kind", "knots"});
    const json& knots_j = require(j, "knots", where);
    if (!knots_j.is_array()) throw InvalidSpec(where + ".knots must be an array");
    family::EmpiricalCdf f;
    for (const auto& knot : knots_j) {
      if (!knot.is_array() || knot.size() != 2) throw InvalidSpec(where + ".knots entries must be [p, F(p)] pairs");
      f.knots.emplace_back(number(knot[0], "knot price"), number(knot[1], "knot cdf"));
    }
    return ContinuousValuation(support, std::move(f));
  }
  throw InvalidSpec("unknown valuation kind '" + kind + "' in " + where);
}

}  // namespace

MarketSpec market_from_json(const json& doc) {
  expect_object(doc, "market");
  reject_unknown(doc, "market", {"support", "metric", "segments"});

  MarketSpec spec;
  const json& sup = require(doc, "support", "market");
  expect_object(sup, "support");
  reject_unknown(sup, "support", {"lo", "hi"});
  spec.support.lo = number(require(sup, "lo", "support"), "support.lo");
  spec.support.hi = number(require(sup, "hi", "support"), "support.hi");

  const json& metric = require(doc, "metric", "market");
  expect_object(metric, "metric");
  const json& mkind = require(metric, "kind", "metric");
  if (mkind == "euclidean") {
    reject_unknown(metric, "metric", {"kind"});
    spec.metric = Metric::euclidean();
  } else if (mkind == "matrix") {
    reject_unknown(metric, "metric", {"kind", "d"});
    const json& rows_j = require(metric, "d", "metric");
    if (!rows_j.is_array()) throw InvalidSpec("metric.d must be an array of rows");
    std::vector<std::vector<double>> rows;
    for (const auto& row : rows_j) rows.push_back(numbers(row, "metric.d row"));
    spec.metric = Metric::explicit_matrix(DistanceMatrix::from_rows(rows));
  } else {
    throw InvalidSpec("metric.kind must be \"euclidean\" or \"matrix\"");
  }

  const json& segs = require(doc, "segments", "market");
  if (!segs.is_array()) throw InvalidSpec("segments must be an array");
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const std::string where = "segments[" + std::to_string(i) + "]";
    const json& s = segs[i];
    expect_object(s, where);
    reject_unknown(s, where, {"feature", "beta", "valuation"});
    Segment seg;
    if (auto it = s.find("feature"); it != s.end()) seg.feature = numbers(*it, where + ".feature");
    seg.beta = number(require(s, "beta", where), where + ".beta");
    seg.valuation = valuation_from_json(require(s, "valuation", where), spec.support, where + ".valuation");
    spec.segments.push_back(std::move(seg));
  }
  return spec;
}

MarketSpec parse_market(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidSpec(std::string("malformed JSON: ") + e.what());
  }
  return market_from_json(doc);
}

MarketSpec load_market(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidSpec("cannot read market file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_market(buf.str());
}

json market_to_json(const MarketSpec& spec) {
  json doc;
  doc["support"] = {{"lo", spec.support.lo}, {"hi", spec.support.hi}};
  if (spec.metric.kind == Metric::Kind::kMatrix) {
    json rows = json::array();
    const auto& d = spec.metric.matrix;
    for (std::size_t i = 0; i < d.size(); ++i) {
      json row = json::array();
      for (std::size_t j = 0; j < d.size(); ++j) row.push_back(d(i, j));
      rows.push_back(row);
    }
    doc["metric"] = {{"kind", "matrix"}, {"d", rows}};
  } else {
    doc["metric"] = {{"kind", "euclidean"}};
  }
  json segs = json::array();
  for (const auto& seg : spec.segments) {
    json v = std::visit(
        Overloaded{
            [](const DiscreteValuation& dv) {
              return json{{"kind", "discrete"},
                          {"values", std::vector<double>(dv.values().begin(), dv.values().end())},
                          {"probs", std::vector<double>(dv.probs().begin(), dv.probs().end())}};
            },
            [](const ContinuousValuation& cv) {
              return std::visit(
                  Overloaded{
                      [](const family::Uniform&) { return json{{"kind", "uniform"}}; },
                      [](const family::Power& f) { return json{{"kind", "power"}, {"exponent", f.exponent}}; },
                      [](const family::TruncatedExponential& f) {
                        return json{{"kind", "trunc-exp"}, {"rate", f.rate}};
                      },
                      [](const family::TriangleRevenue& f) {
                        return json{{"kind", "triangle-revenue"},
                                    {"peak_price", f.peak_price},
                                    {"peak_revenue", f.peak_revenue}};
                      },
                      [](const family::EmpiricalCdf& f) {
                        json knots = json::array();
                        for (const auto& [p, F] : f.knots) knots.push_back({p, F});
                        return json{{"kind", "empirical-cdf"}, {"knots", knots}};
                      },
                  },
                  cv.family());
            },
        },
        seg.valuation);
    segs.push_back({{"feature", seg.feature}, {"beta", seg.beta}, {"valuation", v}});
  }
  doc["segments"] = segs;
  return doc;
}

}  // namespace fairprice
