#pragma once

#include <string>

#include "xopt/margrabe.hpp"
#include "xopt/moments.hpp"

namespace xopt {

/// Second-order expansion of E[C_M(V1+, V2+, rho+)] around the means.
/// First-order terms vanish in expectation; the rho+ cross terms vanish
/// because the correlation noise is independent of the volatility noise.
struct TaylorBreakdown {
  double base = 0.0;         // C_M(x0)
  double term_var1 = 0.0;    // 1/2 d2C/dx1^2 Var(V1+)
  double term_var2 = 0.0;    // 1/2 d2C/dx2^2 Var(V2+)
  double term_varrho = 0.0;  // 1/2 d2C/dx3^2 Var(rho+)
  double term_cov12 = 0.0;   // d2C/dx1dx2 cov(V1+, V2+)
  double total = 0.0;
};

struct PriceReport {
  std::string method;  // "taylor", "mc", "margrabe-const"
  double price = 0.0;
  double std_error = 0.0;  // MC only
  TaylorBreakdown breakdown;
  MomentSummary moments;
  DiscountMode discount_mode = DiscountMode::standard;
  MargrabeDerivs kernel;  // at x0 (Taylor only)
};

struct TaylorOptions {
  MomentBackend backend = MomentBackend::closed_form;
  DiscountMode discount_mode = DiscountMode::standard;
  OdeOptions ode{};
};

[[nodiscard]] TaylorBreakdown assemble_taylor(const MargrabeDerivs& d, const MomentSummary& m);

/// Throws NumericalError when v+(x0) <= eps.
[[nodiscard]] PriceReport price_taylor(const ModelParams& params, const MarketState& state,
                                       const TaylorOptions& opts = {});

/// Margrabe price with the integrated quantities frozen at their means.
[[nodiscard]] PriceReport price_margrabe_const(const ModelParams& params, const MarketState& state,
                                               const TaylorOptions& opts = {});

struct DeltaReport {
  double delta = 0.0;
  double step = 0.0;  // absolute bump applied to S0 of the leg
};

/// Central difference of price_taylor in S0[leg] with step rel_step * S0[leg].
[[nodiscard]] DeltaReport delta_taylor(const ModelParams& params, const MarketState& state, std::size_t leg,
                                       const TaylorOptions& opts = {}, double rel_step = 1e-5);

}  // namespace xopt
