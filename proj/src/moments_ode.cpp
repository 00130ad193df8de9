#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <string>

#include "xopt/errors.hpp"
#include "xopt/moments.hpp"

namespace xopt {

namespace {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 20>;

// Layout of the state vector.
enum Slot : std::size_t {
  kR1, kR2, kRhoRhoPlus, kR1Plus, kR2Plus,
  kA1, kA2, kAVPlus, kA1Plus, kA2Plus,  // asset 1
  kB1, kB2, kBVPlus, kB1Plus, kB2Plus,  // asset 2
  kMs12, kMv12, kV1V2Plus, kV2V1Plus, kMv12Plus,
};

struct MomentSystem {
  const ModelParams& p;

  void operator()(const State& x, State& dx, double /*t*/) const {
    const double g = p.gamma_bar;
    const double L = p.gamma_level;
    const double a2 = p.alpha_bar * p.alpha_bar;

    dx[kR1] = g * (L - x[kR1]);
    dx[kR2] = 2.0 * g * L * x[kR1] - (2.0 * g + a2) * x[kR2] + a2;
    dx[kRhoRhoPlus] = g * L * x[kR1Plus] - g * x[kRhoRhoPlus] + x[kR2];
    dx[kR1Plus] = x[kR1];
    dx[kR2Plus] = 2.0 * x[kRhoRhoPlus];

    const std::size_t base[2] = {kA1, kB1};
    for (std::size_t j = 0; j < 2; ++j) {
      const std::size_t b = base[j];
      const double c = p.c[j];
      const double vl = p.v_level[j];
      const double xi2 = p.xi[j] * p.xi[j];
      dx[b + 0] = c * (vl - x[b + 0]);
      dx[b + 1] = (2.0 * c * vl + xi2) * x[b + 0] - 2.0 * c * x[b + 1];
      dx[b + 2] = c * vl * x[b + 3] - c * x[b + 2] + x[b + 1];
      dx[b + 3] = x[b + 0];
      dx[b + 4] = 2.0 * x[b + 2];
    }

    const double c1 = p.c[0], c2 = p.c[1];
    const double l1 = p.v_level[0], l2 = p.v_level[1];
    dx[kMs12] = -(p.alpha[0] + p.alpha[1]) * x[kMs12] + p.beta[0] * p.beta[1] * p.rho_v;
    dx[kMv12] = c2 * l2 * x[kA1] + c1 * l1 * x[kB1] - (c1 + c2) * x[kMv12] +
                p.xi[0] * p.xi[1] * p.rho_v * x[kMs12];
    dx[kV1V2Plus] = c1 * l1 * x[kB1Plus] - c1 * x[kV1V2Plus] + x[kMv12];
    dx[kV2V1Plus] = c2 * l2 * x[kA1Plus] - c2 * x[kV2V1Plus] + x[kMv12];
    dx[kMv12Plus] = x[kV1V2Plus] + x[kV2V1Plus];
  }
};

}  // namespace

MomentState solve_moment_odes(const ModelParams& params, const MarketState& state, double t,
                              const OdeOptions& opts) {
  if (!(t >= 0.0)) throw ModelError("moment horizon must be nonnegative");

  State x{};
  x[kR1] = state.rho0;
  x[kR2] = state.rho0 * state.rho0;
  x[kA1] = state.v0[0];
  x[kA2] = state.v0[0] * state.v0[0];
  x[kB1] = state.v0[1];
  x[kB2] = state.v0[1] * state.v0[1];
  const Pair sig0 = state.sigma0();
  x[kMs12] = sig0[0] * sig0[1];
  x[kMv12] = state.v0[0] * state.v0[1];

  if (t > 0.0) {
    MomentSystem sys{params};
    auto stepper = odeint::make_controlled(opts.abs_tol, opts.rel_tol, odeint::runge_kutta_dopri5<State>());
    double now = 0.0;
    double dt = std::min(1e-3, t);
    std::size_t steps = 0;
    const double t_eps = 1e-14 * std::max(1.0, t);
    while (t - now > t_eps) {
      if (++steps > opts.max_steps) {
        throw NumericalError("moment ODE did not reach t = " + std::to_string(t) + " within " +
                             std::to_string(opts.max_steps) + " steps at tolerance " +
                             std::to_string(opts.abs_tol));
      }
      dt = std::min(dt, t - now);
      stepper.try_step(sys, x, now, dt);
    }
  }

  MomentState m;
  m.t = t;
  m.mr1 = x[kR1];
  m.mr2 = x[kR2];
  m.rho_rho_plus = x[kRhoRhoPlus];
  m.mr1_plus = x[kR1Plus];
  m.mr2_plus = x[kR2Plus];
  m.mv1 = {x[kA1], x[kB1]};
  m.mv2 = {x[kA2], x[kB2]};
  m.v_v_plus = {x[kAVPlus], x[kBVPlus]};
  m.mv1_plus = {x[kA1Plus], x[kB1Plus]};
  m.mv2_plus = {x[kA2Plus], x[kB2Plus]};
  m.ms12 = x[kMs12];
  m.mv12 = x[kMv12];
  m.v1_v2_plus = x[kV1V2Plus];
  m.v2_v1_plus = x[kV2V1Plus];
  m.mv12_plus = x[kMv12Plus];
  return m;
}

}  // namespace xopt
