#pragma once

#include <array>
#include <cstddef>
#include <string_view>

#include "xopt/model.hpp"

namespace xopt {

/// How the integrated moments are evaluated.
///   closed_form     re-derived analytic expressions (default)
///   ode             adaptive Runge-Kutta solve of the linear moment system
///   paper_verbatim  the printed published expressions, typos included;
///                   kept for divergence reporting only
enum class MomentBackend { closed_form, ode, paper_verbatim };

[[nodiscard]] std::string_view to_string(MomentBackend b) noexcept;
/// Accepts "closed_form"/"closed-form", "ode", "paper_verbatim"/"paper-verbatim".
[[nodiscard]] MomentBackend parse_backend(std::string_view s);

struct OdeOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  std::size_t max_steps = 1'000'000;
};

/// Moments of the correlation and of its time integral rho+_t.
struct CorrMoments {
  double t = 0.0;
  double mr1 = 0.0;       // E[rho_t]
  double mr2 = 0.0;       // E[rho_t^2]
  double mr1_plus = 0.0;  // E[rho+_t]
  double mr2_plus = 0.0;  // E[(rho+_t)^2]
  double var_plus = 0.0;  // Var(rho+_t)
};

/// Moments of one squared volatility and of its time integral V+_t.
struct VarMoments {
  double t = 0.0;
  std::size_t asset = 0;  // 0 or 1
  double mv1 = 0.0;
  double mv2 = 0.0;
  double mv1_plus = 0.0;
  double mv2_plus = 0.0;
  double var_plus = 0.0;
};

struct CrossMoments {
  double t = 0.0;
  double ms12 = 0.0;       // E[sigma1_t sigma2_t]
  double mv12 = 0.0;       // E[V1_t V2_t]
  double mv12_plus = 0.0;  // E[V1+_t V2+_t]
  double cov_plus = 0.0;   // cov(V1+_t, V2+_t)
};

/// The five statistics entering the second-order expansion.
struct MomentSummary {
  std::array<double, 3> x0{};   // E[V1+_T], E[V2+_T], E[rho+_T]
  std::array<double, 3> var{};  // Var of the same three
  double cov12 = 0.0;           // cov(V1+_T, V2+_T)
  MomentBackend backend = MomentBackend::closed_form;
};

/// Full state of the linear moment system at one time.
struct MomentState {
  double t = 0.0;
  // correlation block
  double mr1 = 0.0, mr2 = 0.0, rho_rho_plus = 0.0, mr1_plus = 0.0, mr2_plus = 0.0;
  // per-asset blocks
  Pair mv1{}, mv2{}, v_v_plus{}, mv1_plus{}, mv2_plus{};
  // cross block
  double ms12 = 0.0, mv12 = 0.0;
  double v1_v2_plus = 0.0;  // E[V1_t V2+_t]
  double v2_v1_plus = 0.0;  // E[V2_t V1+_t]
  double mv12_plus = 0.0;
};

[[nodiscard]] CorrMoments corr_moments(const ModelParams& params, double rho0, double t,
                                       MomentBackend backend = MomentBackend::closed_form,
                                       const OdeOptions& ode = {});

[[nodiscard]] VarMoments var_moments(const ModelParams& params, double v0, std::size_t asset, double t,
                                     MomentBackend backend = MomentBackend::closed_form,
                                     const OdeOptions& ode = {});

[[nodiscard]] CrossMoments cross_moments(const ModelParams& params, const MarketState& state, double t,
                                         MomentBackend backend = MomentBackend::closed_form,
                                         const OdeOptions& ode = {});

/// Integrates the closed linear moment system from t = 0. Throws
/// NumericalError when the step budget is exhausted.
[[nodiscard]] MomentState solve_moment_odes(const ModelParams& params, const MarketState& state, double t,
                                            const OdeOptions& opts = {});

[[nodiscard]] MomentSummary moment_summary(const ModelParams& params, const MarketState& state, double maturity,
                                           MomentBackend backend = MomentBackend::closed_form,
                                           const OdeOptions& ode = {});

namespace closed_form {
CorrMoments corr(const ModelParams& p, double rho0, double t);
VarMoments var(const ModelParams& p, double v0, std::size_t asset, double t);
CrossMoments cross(const ModelParams& p, const MarketState& s, double t);
}  // namespace closed_form

namespace paper_verbatim {
CorrMoments corr(const ModelParams& p, double rho0, double t);
VarMoments var(const ModelParams& p, double v0, std::size_t asset, double t);
CrossMoments cross(const ModelParams& p, const MarketState& s, double t);
}  // namespace paper_verbatim

}  // namespace xopt
