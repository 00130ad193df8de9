#include "xopt/margrabe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "xopt/errors.hpp"

namespace xopt {

std::string_view to_string(DiscountMode m) noexcept {
  return m == DiscountMode::standard ? "standard" : "paper_eq9";
}

DiscountMode parse_discount_mode(std::string_view s) {
  if (s == "standard") return DiscountMode::standard;
  if (s == "paper_eq9" || s == "paper-eq9") return DiscountMode::paper_eq9;
  throw ModelError("unknown discount mode '" + std::string(s) + "'");
}

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0); }

double normal_pdf(double x) noexcept {
  constexpr double inv_sqrt_2pi = 0.3989422804014326779399460599343818684758586311649;
  return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

double effective_variance_unclamped(double v1p, double v2p, double rhop) {
  if (!(v1p >= 0.0) || !(v2p >= 0.0)) throw ModelError("integrated variances must be nonnegative");
  return v1p + v2p - 2.0 * std::sqrt(v1p * v2p) * rhop;
}

double effective_variance(double v1p, double v2p, double rhop) {
  return std::max(effective_variance_unclamped(v1p, v2p, rhop), 0.0);
}

namespace {

struct Legs {
  double m1;  // discounted c S1
  double m2;  // discounted m S2
  double m3;  // log(c S1 / (m S2))
};

Legs legs(const MargrabeInputs& in) {
  if (!(in.s0[0] > 0.0) || !(in.s0[1] >= 0.0)) throw ModelError("spot prices must be positive");
  const double disc = in.discount_mode == DiscountMode::paper_eq9 ? std::exp(-in.rate * in.maturity) : 1.0;
  const double a = in.units[0] * in.s0[0];
  const double b = in.units[1] * in.s0[1];
  return {disc * a, disc * b, std::log(a / b)};
}

}  // namespace

double margrabe_price(const MargrabeInputs& in) {
  const Legs l = legs(in);
  if (l.m2 == 0.0) return l.m1;
  const double v = effective_variance(in.x[0], in.x[1], in.x[2]);
  if (v <= 0.0) return std::max(l.m1 - l.m2, 0.0);
  const double sv = std::sqrt(v);
  const double d1 = l.m3 / sv + 0.5 * sv;
  const double d2 = d1 - sv;
  return l.m1 * normal_cdf(d1) - l.m2 * normal_cdf(d2);
}

M4Partials m4_partials(const Vec3& x) {
  const double r1 = std::sqrt(x[0]);
  const double r2 = std::sqrt(x[1]);
  M4Partials m;
  m.value = x[0] + x[1] - 2.0 * r1 * r2 * x[2];
  m.grad = {1.0 - r2 * x[2] / r1, 1.0 - r1 * x[2] / r2, -2.0 * r1 * r2};
  const double h11 = r2 * x[2] / (2.0 * x[0] * r1);
  const double h22 = r1 * x[2] / (2.0 * x[1] * r2);
  const double h12 = -x[2] / (2.0 * r1 * r2);
  const double h13 = -r2 / r1;
  const double h23 = -r1 / r2;
  m.hess = {{{h11, h12, h13}, {h12, h22, h23}, {h13, h23, 0.0}}};
  return m;
}

M4Partials m4_partials_printed(const Vec3& x) {
  const double r1 = std::sqrt(x[0]);
  const double r2 = std::sqrt(x[1]);
  M4Partials m;
  m.value = x[0] * x[1] - 2.0 * r1 * r2 * x[2];
  m.grad = {x[1] - r2 * x[2] / r1, x[0] - r1 * x[2] / r2, -2.0 * r1 * r2};
  const double h11 = r2 * x[2] / (2.0 * x[0] * r1);
  const double h22 = r1 * x[2] / (2.0 * x[1] * r2);
  const double h12 = 1.0 - x[2] / (2.0 * r1 * r2);
  const double h13 = -r2 / r1;
  const double h23 = -r1 / r2;
  m.hess = {{{h11, h12, h13}, {h12, h22, h23}, {h13, h23, 0.0}}};
  return m;
}

MargrabeDerivs margrabe_grad_hess(const MargrabeInputs& in, double eps) {
  if (!(in.x[0] > eps)) throw NumericalError("V1+ = " + std::to_string(in.x[0]) + " is at the singular set x1 <= eps");
  if (!(in.x[1] > eps)) throw NumericalError("V2+ = " + std::to_string(in.x[1]) + " is at the singular set x2 <= eps");
  const Legs l = legs(in);
  const M4Partials m4 = m4_partials(in.x);
  if (!(m4.value > eps)) {
    throw NumericalError("effective variance v+ = " + std::to_string(m4.value) + " <= eps at x = (" +
                         std::to_string(in.x[0]) + ", " + std::to_string(in.x[1]) + ", " +
                         std::to_string(in.x[2]) + ")");
  }

  const double v = m4.value;
  const double sv = std::sqrt(v);
  const double d1 = l.m3 / sv + 0.5 * sv;
  const double d2 = d1 - sv;
  const double f1 = normal_pdf(d1);
  const double f2 = normal_pdf(d2);

  // d1 = M3 v^{-1/2} + v^{1/2}/2,  d2 = M3 v^{-1/2} - v^{1/2}/2; chain through v = M4(x)
  const double v_m32 = 1.0 / (v * sv);
  const double v_m12 = 1.0 / sv;
  const double v_m52 = v_m32 / v;
  const double d1_v = -0.5 * l.m3 * v_m32 + 0.25 * v_m12;
  const double d2_v = -0.5 * l.m3 * v_m32 - 0.25 * v_m12;
  const double d1_vv = 0.75 * l.m3 * v_m52 - 0.125 * v_m32;
  const double d2_vv = 0.75 * l.m3 * v_m52 + 0.125 * v_m32;

  MargrabeDerivs out;
  out.price = l.m1 * normal_cdf(d1) - l.m2 * normal_cdf(d2);
  Vec3 dd1{}, dd2{};
  for (int j = 0; j < 3; ++j) {
    dd1[j] = d1_v * m4.grad[j];
    dd2[j] = d2_v * m4.grad[j];
    out.grad[j] = l.m1 * f1 * dd1[j] - l.m2 * f2 * dd2[j];
  }
  for (int j = 0; j < 3; ++j) {
    for (int k = j; k < 3; ++k) {
      const double gg = m4.grad[j] * m4.grad[k];
      const double dd1_jk = d1_vv * gg + d1_v * m4.hess[j][k];
      const double dd2_jk = d2_vv * gg + d2_v * m4.hess[j][k];
      const double h = l.m1 * f1 * (-d1 * dd1[j] * dd1[k] + dd1_jk) - l.m2 * f2 * (-d2 * dd2[j] * dd2[k] + dd2_jk);
      out.hess[j][k] = h;
      out.hess[k][j] = h;
    }
  }
  return out;
}

FdReport fd_check(const MargrabeInputs& in, double h) {
  if (!(h > 0.0)) throw ModelError("finite-difference step must be positive");
  const MargrabeDerivs an = margrabe_grad_hess(in);
  // same price in extended precision so that cancellation in the stencils
  // stays below the tolerances being checked
  const Legs lg = legs(in);
  auto price_at = [&](const Vec3& x) -> long double {
    const long double x1 = x[0], x2 = x[1];
    const long double v = x1 + x2 - 2.0L * std::sqrt(x1 * x2) * x[2];
    if (!(v > 0.0L)) return std::max(lg.m1 - lg.m2, 0.0);
    const long double sv = std::sqrt(v);
    const long double m3 = std::log(static_cast<long double>(in.units[0]) * in.s0[0] /
                                    (static_cast<long double>(in.units[1]) * in.s0[1]));
    const long double d1 = m3 / sv + 0.5L * sv;
    const long double d2 = d1 - sv;
    const long double k = 0.70710678118654752440084436210484903928L;
    const long double disc = static_cast<long double>(lg.m1) / (static_cast<long double>(in.units[0]) * in.s0[0]);
    return disc * (static_cast<long double>(in.units[0]) * in.s0[0] * 0.5L * std::erfc(-d1 * k) -
                   static_cast<long double>(in.units[1]) * in.s0[1] * 0.5L * std::erfc(-d2 * k));
  };

  Vec3 step{};
  // variances scale relative to themselves, rho+ is already on unit scale
  for (int j = 0; j < 3; ++j) step[j] = h * (j < 2 ? in.x[j] : std::max(1.0, std::abs(in.x[j])));

  Vec3 fd_grad{};
  for (int j = 0; j < 3; ++j) {
    Vec3 xp = in.x, xm = in.x;
    xp[j] += step[j];
    xm[j] -= step[j];
    fd_grad[j] = static_cast<double>((price_at(xp) - price_at(xm)) / (2.0L * step[j]));
  }

  auto mixed = [&](int j, int k, double sj, double sk) {
    Vec3 pp = in.x, pm = in.x, mp = in.x, mm = in.x;
    pp[j] += sj; pp[k] += sk;
    pm[j] += sj; pm[k] -= sk;
    mp[j] -= sj; mp[k] += sk;
    mm[j] -= sj; mm[k] -= sk;
    return static_cast<double>((price_at(pp) - price_at(pm) - price_at(mp) + price_at(mm)) / (4.0L * sj * sk));
  };
  Mat3 fd_hess{};
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      const double sj = 100.0 * step[j];
      const double sk = 100.0 * step[k];
      const double coarse = mixed(j, k, sj, sk);
      const double fine = mixed(j, k, 0.5 * sj, 0.5 * sk);
      fd_hess[j][k] = (4.0 * fine - coarse) / 3.0;
    }
  }

  auto rel_dev = [](double a, double b, double floor) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
  };
  FdReport rep;
  double gscale = 0.0, hscale = 0.0;
  for (int j = 0; j < 3; ++j) {
    gscale = std::max(gscale, std::abs(an.grad[j]));
    for (int k = 0; k < 3; ++k) hscale = std::max(hscale, std::abs(an.hess[j][k]));
  }
  for (int j = 0; j < 3; ++j) {
    rep.grad_deviation = std::max(rep.grad_deviation, rel_dev(an.grad[j], fd_grad[j], 1e-4 * gscale));
    for (int k = 0; k < 3; ++k) {
      rep.hess_deviation = std::max(rep.hess_deviation, rel_dev(an.hess[j][k], fd_hess[j][k], 1e-4 * hscale));
    }
  }
  rep.max_deviation = std::max(rep.grad_deviation, rep.hess_deviation);
  rep.x3_deviation = std::max(rel_dev(an.grad[2], fd_grad[2], 1e-4 * gscale),
                              rel_dev(an.hess[2][2], fd_hess[2][2], 1e-4 * hscale));

  // the Hessian stencil moves v+ by roughly |grad M4| * 100 step
  const M4Partials m4 = m4_partials(in.x);
  double dv = 0.0;
  for (int j = 0; j < 3; ++j) dv += std::abs(m4.grad[j]) * 100.0 * step[j];
  rep.reliable = m4.value > 100.0 * dv;
  return rep;
}

}  // namespace xopt
