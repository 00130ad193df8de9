#include "xopt/config.hpp"

#include <cmath>
#include <fstream>

#include "xopt/errors.hpp"

namespace xopt {

using nlohmann::json;

namespace {

double get_number(const json& obj, const char* key, const std::string& path, double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(path + "." + key, "expected a number");
  return v.get<double>();
}

Pair get_pair(const json& obj, const char* key, const std::string& path, Pair fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  const std::string where = path + "." + key;
  if (!v.is_array() || v.size() != 2) throw ConfigError(where, "expected an array of two numbers");
  Pair out{};
  for (std::size_t i = 0; i < 2; ++i) {
    if (!v[i].is_number()) throw ConfigError(where + "[" + std::to_string(i) + "]", "expected a number");
    out[i] = v[i].get<double>();
  }
  return out;
}

const json& section(const json& root, const char* key) {
  static const json empty = json::object();
  if (!root.contains(key)) return empty;
  const auto& s = root.at(key);
  if (!s.is_object()) throw ConfigError(key, "expected an object");
  return s;
}

bool rel_equal(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace

Config parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("$", "expected a JSON object");
  const ModelParams ref = reference_params();
  Config cfg;

  const json& vol = section(j, "vol");
  const json& corr_j = section(j, "corr");
  CorrelationParams corr{get_number(corr_j, "gamma", "corr", ref.gamma_bar),
                         get_number(corr_j, "level", "corr", ref.gamma_level),
                         get_number(corr_j, "alpha", "corr", ref.alpha_bar)};
  const double rho_v = get_number(vol, "rho_v", "vol", ref.rho_v);

  const bool has_ou = vol.contains("alpha") || vol.contains("beta");
  const bool has_var = vol.contains("c") || vol.contains("xi") || vol.contains("v_level");
  try {
    if (has_ou) {
      cfg.params = ModelParams::from_ou(get_pair(vol, "alpha", "vol", ref.alpha),
                                        get_pair(vol, "beta", "vol", ref.beta), rho_v, corr);
      if (has_var) {
        const Pair c = get_pair(vol, "c", "vol", cfg.params.c);
        const Pair vl = get_pair(vol, "v_level", "vol", cfg.params.v_level);
        const Pair xi = get_pair(vol, "xi", "vol", cfg.params.xi);
        for (int k = 0; k < 2; ++k) {
          if (!rel_equal(c[k], cfg.params.c[k])) throw ConfigError("vol.c", "inconsistent with vol.alpha (c = 2 alpha)");
          if (!rel_equal(xi[k], cfg.params.xi[k])) throw ConfigError("vol.xi", "inconsistent with vol.beta (xi = 2 beta)");
          if (!rel_equal(vl[k], cfg.params.v_level[k])) {
            throw ConfigError("vol.v_level", "inconsistent with vol.alpha/beta (v_level = beta^2/(2 alpha))");
          }
        }
      }
    } else {
      const Pair c = get_pair(vol, "c", "vol", ref.c);
      const Pair xi = get_pair(vol, "xi", "vol", ref.xi);
      if (vol.contains("v_level")) {
        cfg.params = ModelParams::from_variance(c, get_pair(vol, "v_level", "vol", ref.v_level), xi, rho_v, corr);
      } else {
        cfg.params = ModelParams::from_rate_and_vol(c, xi, rho_v, corr);
      }
    }
  } catch (const ModelError& e) {
    throw ConfigError("vol", e.what());
  }

  const json& m = section(j, "market");
  const MarketState mref = reference_market();
  cfg.market.s0 = get_pair(m, "s0", "market", mref.s0);
  cfg.market.v0 = get_pair(m, "v0", "market", mref.v0);
  cfg.market.rho0 = get_number(m, "rho0", "market", mref.rho0);
  cfg.market.rate = get_number(m, "rate", "market", mref.rate);
  cfg.market.maturity = get_number(m, "maturity", "market", mref.maturity);
  cfg.market.units = get_pair(m, "units", "market", mref.units);

  const auto rep = validate(cfg.params, cfg.market);
  if (!rep.ok()) {
    const auto& v = rep.violations.front();
    const bool market_field = v.field.rfind("s0", 0) == 0 || v.field.rfind("v0", 0) == 0 ||
                              v.field.rfind("rho0", 0) == 0 || v.field.rfind("rate", 0) == 0 ||
                              v.field.rfind("maturity", 0) == 0 || v.field.rfind("units", 0) == 0;
    const bool corr_field = v.field.rfind("gamma", 0) == 0 || v.field == "alpha_bar";
    const std::string prefix = market_field ? "market." : corr_field ? "corr." : "vol.";
    throw ConfigError(prefix + v.field, v.message);
  }
  return cfg;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("$", "cannot open config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("$", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

json to_json(const Config& cfg) {
  const auto& p = cfg.params;
  const auto& m = cfg.market;
  return json{
      {"vol", {{"alpha", p.alpha}, {"beta", p.beta}, {"c", p.c}, {"v_level", p.v_level}, {"xi", p.xi}, {"rho_v", p.rho_v}}},
      {"corr", {{"gamma", p.gamma_bar}, {"level", p.gamma_level}, {"alpha", p.alpha_bar}}},
      {"market",
       {{"s0", m.s0}, {"v0", m.v0}, {"rho0", m.rho0}, {"rate", m.rate}, {"maturity", m.maturity}, {"units", m.units}}},
  };
}

}  // namespace xopt
