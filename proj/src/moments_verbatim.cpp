// The published closed forms, transcribed term by term, printed typos
// included. Nothing downstream prices with these; they exist so the
// divergence from the corrected forms can be reported.
//
// Readings needed to evaluate them at all:
//  - the bare "alpha^2" in b0 is read as the correlation vol squared;
//  - B_j divides by (c2 - c1); at c1 = c2 its continuous extension is used;
//  - mv12 is the solution printed for the (drift-deficient) mv12 equation.

#include <cmath>

#include "exp_integrals.hpp"
#include "xopt/moments.hpp"

namespace xopt::paper_verbatim {

CorrMoments corr(const ModelParams& p, double rho0, double t) {
  const double g = p.gamma_bar;
  const double L = p.gamma_level;
  const double a2v = p.alpha_bar * p.alpha_bar;
  const double k = 2.0 * g + a2v;
  const double q = (rho0 - L) / g;

  const double a1 = (2.0 * g * L * L + a2v) / k;
  const double a2 = 2.0 * g * L * (rho0 - L) / (g + a2v);
  const double r = rho0 * rho0 - a1 - a2;

  const double b0 = (1.0 / (g * g)) *
                    (-a1 + rho0 * rho0 - 2.0 * L + 2.0 / (g * g) - (a2v / (g * g)) * (1.0 + a1 / g + a2) -
                     a2v * r / (g * k));
  const double b1 = (1.0 / g) * (-a2 + 2.0 * L - 2.0 / (g * g) + a2v / g - a1 * a2v / (g * g));
  const double b2 = 1.0;
  const double b3 = a2 * a2v / (g * g * g);
  const double b4 = -(a2v / (g * g)) * r / (k * (g + a2v));

  const double eg = std::exp(-g * t);
  CorrMoments m;
  m.t = t;
  m.mr1 = L + (rho0 - L) * eg;
  m.mr2 = a1 + a2 * eg + r * std::exp(-k * t);
  m.mr1_plus = L * t + q * (1.0 - eg);
  m.var_plus = b0 + q * q + (b1 + 2.0 * L * q) * t + (b2 + L * L) * t * t + (b3 - 2.0 * L * q) * t * eg +
               b4 * std::exp(-k * t) - (b0 + b4 + 2.0 * q * q) * eg + q * q * std::exp(-2.0 * g * t);
  m.mr2_plus = m.var_plus + m.mr1_plus * m.mr1_plus;
  return m;
}

VarMoments var(const ModelParams& p, double v0, std::size_t asset, double t) {
  const double c = p.c[asset];
  const double L = p.v_level[asset];
  const double xi2 = p.xi[asset] * p.xi[asset];
  const double c3 = c * c * c;

  const double d0 = (2.0 * c * L + xi2) * L / (2.0 * c);
  const double d1 = (2.0 * c + xi2) * (v0 - L) / c;
  const double d2 = v0 * v0 - d0 - d1;

  const double P1 = (L * L / c3) * t * t + (1.0 / c3) * ((2.0 - L / c) * L + xi2 * L) * t +
                    (1.0 / c3) * (v0 * v0 + 2.0 * L * L / (c * c) - xi2 * L / c);
  const double cc = (1.0 / c3) * (xi2 * L / c + d0 + d1 / 2.0 - 2.0 * L * L / (c * c));
  const double g0 = -(1.0 / c3) * (d0 + v0 * v0 - d1);
  const double g1 = -1.0 / c3;
  const double g2 = (1.0 / c3) * xi2 * (v0 - L);

  const double e = std::exp(-c * t);
  VarMoments m;
  m.t = t;
  m.asset = asset;
  m.mv1 = L + (v0 - L) * e;
  m.mv2 = d0 + d1 * e + d2 * e * e;
  m.mv1_plus = L * t + (v0 - L) / c * (1.0 - e);
  m.mv2_plus = P1 + cc * e + g0 * e * e + g1 * e * e * e + g2 * t * e;
  m.var_plus = m.mv2_plus - m.mv1_plus * m.mv1_plus;
  return m;
}

CrossMoments cross(const ModelParams& p, const MarketState& s, double t) {
  const double c1 = p.c[0], c2 = p.c[1];
  const double l1 = p.v_level[0], l2 = p.v_level[1];
  const double C = c1 + c2;
  const double kappa = p.xi[0] * p.xi[1] * p.rho_v;
  const Pair sig0 = s.sigma0();
  const double s12 = sig0[0] * sig0[1];
  const double v01 = s.v0[0], v02 = s.v0[1];
  const double eh = std::exp(-0.5 * C * t);

  const double ms12 = kappa / (2.0 * C) * (1.0 - eh) + s12 * eh;
  const double m11 = l1 + (v01 - l1) * std::exp(-c1 * t);
  const double m12 = l2 + (v02 - l2) * std::exp(-c2 * t);
  const double P3 = v01 * v02 + c2 * v01 * l2 * t + c1 * v02 * l1 * t + c1 * c2 * l1 * l2 * t * t;
  const double A = kappa / (2.0 * C) * (t - (2.0 / C) * (1.0 - eh)) + (2.0 * s12 / C) * (1.0 - eh);

  auto B = [&](int j) {
    const double cj = (j == 1) ? c1 : c2;
    const double sign = (j == 1) ? -1.0 : 1.0;
    // (2(-1)^j / (c2 - c1)) (exp(1/2 (-1)^j (c2 - c1) t) - 1) = int_0^t exp(delta s) ds
    const double delta = 0.5 * sign * (c2 - c1);
    const double Ej = detail::exp_integral(-delta, t);
    return kappa / (2.0 * C) * ((1.0 / cj) * std::expm1(cj * t) - Ej) + s12 * Ej;
  };

  CrossMoments m;
  m.t = t;
  m.ms12 = ms12;
  const double cst = v01 * v02 + 0.5 * kappa * kappa / (C * C) - 2.0 * s12 * kappa / C;
  m.mv12 = kappa * kappa / (2.0 * C * C) - kappa * kappa / (C * C) * eh + 2.0 * s12 * kappa / C * eh +
           cst * std::exp(-C * t);
  m.mv12_plus = (1.0 / (c1 * c2)) * (P3 - (v01 + c1 * l1 * t) * m12 - (v02 + c2 * l2 * t) * m11 + ms12 -
                                     kappa * std::exp(-c1 * t) * B(1) - kappa * std::exp(-c2 * t) * B(2) +
                                     kappa * A);
  const double q1 = l1 * t + (v01 - l1) / c1 * (1.0 - std::exp(-c1 * t));
  const double q2 = l2 * t + (v02 - l2) / c2 * (1.0 - std::exp(-c2 * t));
  m.cov_plus = m.mv12_plus - q1 * q2;
  return m;
}

}  // namespace xopt::paper_verbatim
