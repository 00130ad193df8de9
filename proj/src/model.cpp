#include "xopt/model.hpp"

#include <cmath>
#include <sstream>

#include "xopt/errors.hpp"

namespace xopt {

namespace {

bool close_rel(double a, double b, double tol) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= tol * scale || (scale == 0.0);
}

void check_ou_inputs(const Pair& alpha, const Pair& beta) {
  for (int j = 0; j < 2; ++j) {
    if (!(alpha[j] > 0.0) || !std::isfinite(alpha[j])) {
      throw ModelError("alpha[" + std::to_string(j) + "] must be positive");
    }
    if (!(beta[j] >= 0.0) || !std::isfinite(beta[j])) {
      throw ModelError("beta[" + std::to_string(j) + "] must be nonnegative");
    }
  }
}

}  // namespace

ModelParams ModelParams::from_ou(Pair alpha, Pair beta, double rho_v,
                                 const CorrelationParams& corr) {
  check_ou_inputs(alpha, beta);
  ModelParams p;
  p.alpha = alpha;
  p.beta = beta;
  for (int j = 0; j < 2; ++j) {
    p.c[j] = 2.0 * alpha[j];
    p.v_level[j] = beta[j] * beta[j] / (2.0 * alpha[j]);
    p.xi[j] = 2.0 * beta[j];
  }
  p.rho_v = rho_v;
  p.gamma_bar = corr.speed;
  p.gamma_level = corr.level;
  p.alpha_bar = corr.vol;
  return p;
}

ModelParams ModelParams::from_rate_and_vol(Pair c, Pair xi, double rho_v,
                                           const CorrelationParams& corr) {
  for (int j = 0; j < 2; ++j) {
    if (!(c[j] > 0.0)) throw ModelError("c[" + std::to_string(j) + "] must be positive");
    if (!(xi[j] >= 0.0)) throw ModelError("xi[" + std::to_string(j) + "] must be nonnegative");
  }
  return from_ou({c[0] / 2.0, c[1] / 2.0}, {xi[0] / 2.0, xi[1] / 2.0}, rho_v, corr);
}

ModelParams ModelParams::from_variance(Pair c, Pair v_level, Pair xi, double rho_v,
                                       const CorrelationParams& corr) {
  for (int j = 0; j < 2; ++j) {
    if (!(v_level[j] >= 0.0)) {
      throw ModelError("v_level[" + std::to_string(j) + "] must be nonnegative");
    }
  }
  ModelParams p = from_rate_and_vol(c, xi, rho_v, corr);
  for (int j = 0; j < 2; ++j) {
    if (!close_rel(p.v_level[j], v_level[j], 1e-12)) {
      std::ostringstream os;
      os << "v_level[" << j << "] = " << v_level[j] << " is inconsistent with c and xi"
         << " (xi^2/(4c) = " << p.v_level[j] << ")";
      throw ModelError(os.str());
    }
  }
  return p;
}

ModelParams ModelParams::scaled_noise(double s) const {
  ModelParams p = from_ou(alpha, {beta[0] * s, beta[1] * s}, rho_v, correlation());
  p.alpha_bar = alpha_bar * s;
  return p;
}

Pair MarketState::sigma0() const { return {std::sqrt(v0[0]), std::sqrt(v0[1])}; }

std::string ValidationReport::to_string() const {
  if (ok()) return "ok";
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << violations[i].field << ": " << violations[i].message;
  }
  return os.str();
}

ValidationReport validate(const ModelParams& p, const MarketState& s) {
  ValidationReport rep;
  auto fail = [&](std::string field, std::string msg) {
    rep.violations.push_back({std::move(field), std::move(msg)});
  };
  auto idx = [](const char* name, int j) { return std::string(name) + "[" + std::to_string(j) + "]"; };

  for (int j = 0; j < 2; ++j) {
    if (!(p.alpha[j] > 0.0)) fail(idx("alpha", j), "mean-reversion rate must be positive");
    if (!(p.c[j] > 0.0)) fail(idx("c", j), "mean-reversion rate must be positive");
    if (!(p.beta[j] >= 0.0)) fail(idx("beta", j), "diffusion must be nonnegative");
    if (!(p.xi[j] >= 0.0)) fail(idx("xi", j), "diffusion must be nonnegative");
    if (!(p.v_level[j] >= 0.0)) fail(idx("v_level", j), "variance level must be nonnegative");
    if (p.alpha[j] > 0.0) {
      if (!close_rel(p.c[j], 2.0 * p.alpha[j], 1e-12)) fail(idx("c", j), "c must equal 2 alpha");
      if (!close_rel(p.xi[j], 2.0 * p.beta[j], 1e-12)) fail(idx("xi", j), "xi must equal 2 beta");
      if (!close_rel(p.v_level[j], p.beta[j] * p.beta[j] / (2.0 * p.alpha[j]), 1e-12)) {
        fail(idx("v_level", j), "v_level must equal beta^2/(2 alpha)");
      }
    }
    if (!(s.s0[j] > 0.0)) fail(idx("s0", j), "spot price must be positive");
    if (!(s.v0[j] >= 0.0)) fail(idx("v0", j), "initial variance must be nonnegative");
    if (!(s.units[j] > 0.0)) fail(idx("units", j), "contract units must be positive");
  }
  if (!(std::abs(p.rho_v) <= 1.0)) fail("rho_v", "rho_v out of [-1,1]");
  if (!(p.gamma_bar > 0.0)) fail("gamma_bar", "mean-reversion rate must be positive");
  if (!(std::abs(p.gamma_level) < 1.0)) fail("gamma_level", "gamma_level out of (-1,1)");
  if (!(p.alpha_bar >= 0.0)) fail("alpha_bar", "diffusion must be nonnegative");
  if (!(std::abs(s.rho0) <= 1.0)) fail("rho0", "rho0 out of [-1,1]");
  if (!std::isfinite(s.rate)) fail("rate", "rate must be finite");
  if (!(s.maturity > 0.0)) fail("maturity", "maturity must be positive");
  return rep;
}

void require_valid(const ModelParams& params, const MarketState& state) {
  const auto rep = validate(params, state);
  if (!rep.ok()) throw ModelError(rep.to_string());
}

ModelParams reference_params() {
  return ModelParams::from_rate_and_vol({1.0, 1.0}, {1.0, 1.0}, 0.8, CorrelationParams{0.8, 0.8, 1.0});
}

MarketState reference_market() { return MarketState{}; }

}  // namespace xopt
