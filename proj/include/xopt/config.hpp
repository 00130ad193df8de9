#pragma once

#include <filesystem>
#include <json.hpp>

#include "xopt/model.hpp"

namespace xopt {

struct Config {
  ModelParams params = reference_params();
  MarketState market = reference_market();
};

/// Parses the parameter-file layout
///   { "vol":    {"c":[..], "v_level":[..], "xi":[..], "rho_v":..}  or {"alpha":[..], "beta":[..], ...},
///     "corr":   {"gamma":.., "level":.., "alpha":..},
///     "market": {"s0":[..], "v0":[..], "rho0":.., "rate":.., "maturity":.., "units":[..]} }
/// Missing fields take the reference values. Throws ConfigError with the
/// JSON path of the first bad field.
[[nodiscard]] Config parse_config(const nlohmann::json& j);
[[nodiscard]] Config load_config(const std::filesystem::path& path);

/// Full resolved config, both volatility parametrizations included.
[[nodiscard]] nlohmann::json to_json(const Config& cfg);

}  // namespace xopt
