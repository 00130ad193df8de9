#include "xopt/taylor.hpp"

#include <cmath>
#include <string>

#include "xopt/errors.hpp"

namespace xopt {

namespace {

MargrabeInputs kernel_inputs(const MarketState& s, const MomentSummary& m, DiscountMode mode) {
  MargrabeInputs in;
  in.x = m.x0;
  in.s0 = s.s0;
  in.rate = s.rate;
  in.maturity = s.maturity;
  in.discount_mode = mode;
  in.units = s.units;
  return in;
}

void check_finite(const MomentSummary& m) {
  for (double v : m.var)
    if (!std::isfinite(v)) throw NumericalError("moment variance is not finite");
  if (!std::isfinite(m.cov12)) throw NumericalError("moment covariance is not finite");
}

}  // namespace

TaylorBreakdown assemble_taylor(const MargrabeDerivs& d, const MomentSummary& m) {
  TaylorBreakdown b;
  b.base = d.price;
  b.term_var1 = 0.5 * d.hess[0][0] * m.var[0];
  b.term_var2 = 0.5 * d.hess[1][1] * m.var[1];
  b.term_varrho = 0.5 * d.hess[2][2] * m.var[2];
  b.term_cov12 = d.hess[0][1] * m.cov12;
  b.total = b.base + b.term_var1 + b.term_var2 + b.term_varrho + b.term_cov12;
  return b;
}

PriceReport price_taylor(const ModelParams& params, const MarketState& state, const TaylorOptions& opts) {
  require_valid(params, state);
  PriceReport r;
  r.method = "taylor";
  r.discount_mode = opts.discount_mode;
  r.moments = moment_summary(params, state, state.maturity, opts.backend, opts.ode);
  check_finite(r.moments);
  r.kernel = margrabe_grad_hess(kernel_inputs(state, r.moments, opts.discount_mode));
  r.breakdown = assemble_taylor(r.kernel, r.moments);
  r.price = r.breakdown.total;
  return r;
}

PriceReport price_margrabe_const(const ModelParams& params, const MarketState& state, const TaylorOptions& opts) {
  require_valid(params, state);
  PriceReport r;
  r.method = "margrabe-const";
  r.discount_mode = opts.discount_mode;
  r.moments = moment_summary(params, state, state.maturity, opts.backend, opts.ode);
  r.price = margrabe_price(kernel_inputs(state, r.moments, opts.discount_mode));
  r.breakdown.base = r.price;
  r.breakdown.total = r.price;
  return r;
}

DeltaReport delta_taylor(const ModelParams& params, const MarketState& state, std::size_t leg,
                         const TaylorOptions& opts, double rel_step) {
  if (leg > 1) throw ModelError("leg must be 0 or 1");
  if (!(rel_step > 0.0)) throw ModelError("relative step must be positive");
  const double h = rel_step * state.s0[leg];
  MarketState up = state, dn = state;
  up.s0[leg] += h;
  dn.s0[leg] -= h;
  const double pu = price_taylor(params, up, opts).price;
  const double pd = price_taylor(params, dn, opts).price;
  return {(pu - pd) / (2.0 * h), h};
}

}  // namespace xopt
