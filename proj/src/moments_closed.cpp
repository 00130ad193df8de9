// Closed-form integrated moments.
//
// First moments follow from the linear drifts. For the second moments of the
// integrals we use that every process here has an affine conditional mean,
// E[X_s | F_u] = level + (X_u - level) exp(-k (s - u)), so
//   Cov(X_u, X_s) = Var(X_u) exp(-k (s - u)),  s >= u,
// and Var(X+_t) = (2/k) int_0^t Var(X_u) (1 - exp(-k (t - u))) du. Var(X_u) is a
// short sum of exponentials obtained from the second-moment equations, so each
// integral collapses to detail::decay_kernel terms. The cross covariance of
// V1+ and V2+ is handled the same way with the two one-sided kernels.

#include <cmath>

#include "exp_integrals.hpp"
#include "xopt/errors.hpp"
#include "xopt/moments.hpp"

namespace xopt::closed_form {

using detail::decay_kernel;
using detail::exp_integral;

CorrMoments corr(const ModelParams& p, double rho0, double t) {
  const double g = p.gamma_bar;
  const double L = p.gamma_level;
  const double a2v = p.alpha_bar * p.alpha_bar;
  const double k = 2.0 * g + a2v;

  // E[rho_t^2] = a1 + a2 e^{-g t} + a3 e^{-k t}
  const double a1 = (2.0 * g * L * L + a2v) / k;
  const double a2 = 2.0 * g * L * (rho0 - L) / (g + a2v);
  const double a3 = rho0 * rho0 - a1 - a2;

  CorrMoments m;
  m.t = t;
  m.mr1 = L + (rho0 - L) * std::exp(-g * t);
  m.mr2 = a1 + a2 * std::exp(-g * t) + a3 * std::exp(-k * t);
  m.mr1_plus = L * t + (rho0 - L) * exp_integral(g, t);

  // Var(rho_u) = z0 + z1 e^{-g u} + z2 e^{-2 g u} + z3 e^{-k u}
  const double z0 = a1 - L * L;
  const double z1 = a2 - 2.0 * L * (rho0 - L);
  const double z2 = -(rho0 - L) * (rho0 - L);
  const double z3 = a3;
  const double v = (2.0 / g) * (z0 * decay_kernel(0.0, g, t) + z1 * decay_kernel(g, g, t) +
                                z2 * decay_kernel(2.0 * g, g, t) + z3 * decay_kernel(k, g, t));
  m.var_plus = std::max(v, 0.0);
  m.mr2_plus = m.var_plus + m.mr1_plus * m.mr1_plus;
  return m;
}

VarMoments var(const ModelParams& p, double v0, std::size_t asset, double t) {
  const double c = p.c[asset];
  const double L = p.v_level[asset];
  const double xi2 = p.xi[asset] * p.xi[asset];
  const double K = 2.0 * c * L + xi2;

  VarMoments m;
  m.t = t;
  m.asset = asset;
  m.mv1 = L + (v0 - L) * std::exp(-c * t);
  const double d0 = K * L / (2.0 * c);
  const double d1 = K * (v0 - L) / c;
  const double d2 = v0 * v0 - d0 - d1;
  m.mv2 = d0 + d1 * std::exp(-c * t) + d2 * std::exp(-2.0 * c * t);
  m.mv1_plus = L * t + (v0 - L) * exp_integral(c, t);

  // Var(V_u) = w0 + w1 e^{-c u} + w2 e^{-2 c u}
  const double w0 = xi2 * L / (2.0 * c);
  const double w1 = xi2 * (v0 - L) / c;
  const double w2 = -w0 - w1;
  const double v = (2.0 / c) * (w0 * decay_kernel(0.0, c, t) + w1 * decay_kernel(c, c, t) +
                                w2 * decay_kernel(2.0 * c, c, t));
  m.var_plus = std::max(v, 0.0);
  m.mv2_plus = m.var_plus + m.mv1_plus * m.mv1_plus;
  return m;
}

CrossMoments cross(const ModelParams& p, const MarketState& s, double t) {
  const double c1 = p.c[0];
  const double c2 = p.c[1];
  const double C = c1 + c2;
  const double kappa = p.xi[0] * p.xi[1] * p.rho_v;
  const Pair sig0 = s.sigma0();
  const double s12 = sig0[0] * sig0[1];
  // stationary E[sigma1 sigma2] = beta1 beta2 rho_v / (alpha1 + alpha2)
  const double m_inf = kappa / (2.0 * C);

  CrossMoments m;
  m.t = t;
  m.ms12 = m_inf + (s12 - m_inf) * std::exp(-0.5 * C * t);

  // Cov(V1_u, V2_u) = y0 + y1 e^{-C u / 2} + y2 e^{-C u}
  const double y0 = kappa * m_inf / C;
  const double y1 = 2.0 * kappa * (s12 - m_inf) / C;
  const double y2 = -y0 - y1;
  const double lam[3] = {0.0, 0.5 * C, C};
  const double y[3] = {y0, y1, y2};

  const auto va = var(p, s.v0[0], 0, t);
  const auto vb = var(p, s.v0[1], 1, t);

  double cov_inst = 0.0;
  double cov_int = 0.0;
  for (int k = 0; k < 3; ++k) {
    cov_inst += y[k] * std::exp(-lam[k] * t);
    cov_int += y[k] * (decay_kernel(lam[k], c1, t) / c1 + decay_kernel(lam[k], c2, t) / c2);
  }
  m.mv12 = va.mv1 * vb.mv1 + cov_inst;
  m.cov_plus = cov_int;
  m.mv12_plus = cov_int + va.mv1_plus * vb.mv1_plus;
  return m;
}

}  // namespace xopt::closed_form
