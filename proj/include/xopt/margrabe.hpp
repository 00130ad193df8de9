#pragma once

#include <array>
#include <string_view>

#include "xopt/model.hpp"

namespace xopt {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

/// standard: no discounting of the legs (both assets drift at r under Q).
/// paper_eq9: both legs multiplied by exp(-rT), as printed in the published formula.
enum class DiscountMode { standard, paper_eq9 };

[[nodiscard]] std::string_view to_string(DiscountMode m) noexcept;
/// Accepts "standard", "paper_eq9"/"paper-eq9".
[[nodiscard]] DiscountMode parse_discount_mode(std::string_view s);

[[nodiscard]] double normal_cdf(double x) noexcept;
[[nodiscard]] double normal_pdf(double x) noexcept;

/// Conditional Margrabe price as a function of x = (V1+, V2+, rho+).
/// x3 enters raw (an integral over [0, T]); at T = 1 it is on correlation scale.
struct MargrabeInputs {
  Vec3 x{};
  Pair s0{100.0, 100.0};
  double rate = 0.0;
  double maturity = 1.0;
  DiscountMode discount_mode = DiscountMode::standard;
  Pair units{1.0, 1.0};
};

struct MargrabeDerivs {
  double price = 0.0;
  Vec3 grad{};
  Mat3 hess{};
};

/// v+ before clamping; negative values signal an inconsistent (x1, x2, x3).
[[nodiscard]] double effective_variance_unclamped(double v1p, double v2p, double rhop);

/// v+ = v1p + v2p - 2 sqrt(v1p v2p) rhop, clamped at 0. Throws ModelError on
/// negative variance inputs.
[[nodiscard]] double effective_variance(double v1p, double v2p, double rhop);

[[nodiscard]] double margrabe_price(const MargrabeInputs& in);

/// Partial derivatives of M4(x) = x1 + x2 - 2 sqrt(x1 x2) x3, which is v+.
struct M4Partials {
  double value = 0.0;
  Vec3 grad{};
  Mat3 hess{};
};
[[nodiscard]] M4Partials m4_partials(const Vec3& x);

/// The printed M4 = x1 x2 - 2 sqrt(x1 x2) x3 and its printed partials; kept
/// only to document the divergence from m4_partials.
[[nodiscard]] M4Partials m4_partials_printed(const Vec3& x);

constexpr double kSingularEps = 1e-12;

/// Analytic price, gradient and Hessian in x. Throws NumericalError when
/// v+ <= eps or x1, x2 <= eps (C_M is not differentiable there).
[[nodiscard]] MargrabeDerivs margrabe_grad_hess(const MargrabeInputs& in, double eps = kSingularEps);

struct FdReport {
  double grad_deviation = 0.0;  // max relative deviation over gradient entries
  double hess_deviation = 0.0;  // max relative deviation over Hessian entries
  double max_deviation = 0.0;
  double x3_deviation = 0.0;    // d/dx3 and d2/dx3^2 entries only
  bool reliable = true;         // false when the stencil reaches near the singular set v+ = 0
};

/// Compares the analytic derivatives with central finite differences of
/// margrabe_price: gradient with step h * x_j for the variances and
/// h * max(1, |x3|) for rho+; Hessian from the four-point mixed stencil with
/// one Richardson extrapolation at 100 times those steps. Entry deviations are relative, with a floor of
/// 1e-4 times the largest entry of the same object.
[[nodiscard]] FdReport fd_check(const MargrabeInputs& in, double h = 1e-5);

}  // namespace xopt
