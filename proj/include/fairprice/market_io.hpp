#pragma once

#include <filesystem>
#include <string_view>

#include <json.hpp>

#include "fairprice/market.hpp"

namespace fairprice {

/// Builds a market from its JSON document. Unknown keys, wrong types and
/// missing fields throw InvalidSpec; structural invariants are left to
/// validate().
MarketSpec market_from_json(const nlohmann::json& doc);

/// Parses UTF-8 JSON text (throws InvalidSpec on malformed input).
MarketSpec parse_market(std::string_view text);

MarketSpec load_market(const std::filesystem::path& path);

nlohmann::json market_to_json(const MarketSpec& spec);

}  // namespace fairprice
