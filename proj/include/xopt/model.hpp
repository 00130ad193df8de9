#pragma once

#include <array>
#include <string>
#include <vector>

namespace xopt {

using Pair = std::array<double, 2>;

/// Mean-reverting correlation process d rho = speed (level - rho) dt + vol sqrt(1 - rho^2) dW.
struct CorrelationParams {
  double speed = 0.8;
  double level = 0.8;
  double vol = 1.0;
};

/// All SDE coefficients of the two stochastic volatilities and the
/// stochastic correlation.
///
/// The volatilities are Ornstein-Uhlenbeck processes
///   d sigma_j = -alpha_j sigma_j dt + beta_j dW_j,
/// so the squared volatilities V_j = sigma_j^2 mean-revert as
///   dV_j = c_j (v_level_j - V_j) dt + xi_j sigma_j dW_j
/// with c = 2 alpha, v_level = beta^2 / (2 alpha), xi = 2 beta. Both
/// parametrizations are stored and kept consistent by the factories.
struct ModelParams {
  Pair alpha{0.5, 0.5};
  Pair beta{0.5, 0.5};
  Pair c{1.0, 1.0};
  Pair v_level{0.25, 0.25};
  Pair xi{1.0, 1.0};
  double rho_v = 0.8;
  double gamma_bar = 0.8;
  double gamma_level = 0.8;
  double alpha_bar = 1.0;

  [[nodiscard]] static ModelParams from_ou(Pair alpha, Pair beta, double rho_v,
                                           const CorrelationParams& corr);

  /// Builds from the variance form. v_level is implied by (c, xi); the given
  /// value must agree with xi^2 / (4c) within 1e-12 relative.
  [[nodiscard]] static ModelParams from_variance(Pair c, Pair v_level, Pair xi, double rho_v,
                                                 const CorrelationParams& corr);

  /// Same as from_variance but derives v_level instead of checking it.
  [[nodiscard]] static ModelParams from_rate_and_vol(Pair c, Pair xi, double rho_v,
                                                     const CorrelationParams& corr);

  [[nodiscard]] CorrelationParams correlation() const noexcept {
    return {gamma_bar, gamma_level, alpha_bar};
  }

  /// Multiplies every diffusion coefficient (beta, xi, alpha_bar) by s.
  [[nodiscard]] ModelParams scaled_noise(double s) const;
};

/// Spot prices, initial states, rate, maturity and contract units c, m of the
/// payoff (c S1 - m S2)_+.
struct MarketState {
  Pair s0{100.0, 100.0};
  Pair v0{0.3, 0.3};
  double rho0 = 0.7;
  double rate = 0.04;
  double maturity = 1.0;
  Pair units{1.0, 1.0};

  [[nodiscard]] Pair sigma0() const;
};

struct Violation {
  std::string field;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  [[nodiscard]] bool ok() const noexcept { return violations.empty(); }
  [[nodiscard]] std::string to_string() const;
};

[[nodiscard]] ValidationReport validate(const ModelParams& params, const MarketState& state);

/// Throws ModelError listing every violation when the report is not ok.
void require_valid(const ModelParams& params, const MarketState& state);

/// Illustrative parameter set of the oil-spread experiment: unit
/// mean-reversion rates and vol-of-variance (hence v_level = 0.25),
/// rho_v = 0.8, correlation speed/level 0.8, correlation vol 1.
[[nodiscard]] ModelParams reference_params();

/// S0 = (100, 100), V0 = (0.3, 0.3), rho0 = 0.7, r = 4%, T = 1.
[[nodiscard]] MarketState reference_market();

}  // namespace xopt
