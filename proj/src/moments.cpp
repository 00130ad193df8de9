#include <cmath>
#include <string>

#include "xopt/errors.hpp"
#include "xopt/moments.hpp"

namespace xopt {

std::string_view to_string(MomentBackend b) noexcept {
  switch (b) {
    case MomentBackend::closed_form: return "closed_form";
    case MomentBackend::ode: return "ode";
    case MomentBackend::paper_verbatim: return "paper_verbatim";
  }
  return "unknown";
}

MomentBackend parse_backend(std::string_view s) {
  if (s == "closed_form" || s == "closed-form") return MomentBackend::closed_form;
  if (s == "ode") return MomentBackend::ode;
  if (s == "paper_verbatim" || s == "paper-verbatim") return MomentBackend::paper_verbatim;
  throw ModelError("unknown moment backend '" + std::string(s) + "'");
}

namespace {

void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw ModelError("moment horizon t must be nonnegative");
}

MarketState state_for(const ModelParams& /*p*/, double rho0, Pair v0) {
  MarketState s;
  s.rho0 = rho0;
  s.v0 = v0;
  return s;
}

}  // namespace

CorrMoments corr_moments(const ModelParams& params, double rho0, double t, MomentBackend backend,
                         const OdeOptions& ode) {
  check_time(t);
  switch (backend) {
    case MomentBackend::closed_form: return closed_form::corr(params, rho0, t);
    case MomentBackend::paper_verbatim: return paper_verbatim::corr(params, rho0, t);
    case MomentBackend::ode: break;
  }
  const auto st = solve_moment_odes(params, state_for(params, rho0, {0.0, 0.0}), t, ode);
  CorrMoments m;
  m.t = t;
  m.mr1 = st.mr1;
  m.mr2 = st.mr2;
  m.mr1_plus = st.mr1_plus;
  m.mr2_plus = st.mr2_plus;
  m.var_plus = st.mr2_plus - st.mr1_plus * st.mr1_plus;
  return m;
}

VarMoments var_moments(const ModelParams& params, double v0, std::size_t asset, double t, MomentBackend backend,
                       const OdeOptions& ode) {
  check_time(t);
  if (asset > 1) throw ModelError("asset index must be 0 or 1");
  switch (backend) {
    case MomentBackend::closed_form: return closed_form::var(params, v0, asset, t);
    case MomentBackend::paper_verbatim: return paper_verbatim::var(params, v0, asset, t);
    case MomentBackend::ode: break;
  }
  Pair v{0.0, 0.0};
  v[asset] = v0;
  const auto st = solve_moment_odes(params, state_for(params, 0.0, v), t, ode);
  VarMoments m;
  m.t = t;
  m.asset = asset;
  m.mv1 = st.mv1[asset];
  m.mv2 = st.mv2[asset];
  m.mv1_plus = st.mv1_plus[asset];
  m.mv2_plus = st.mv2_plus[asset];
  m.var_plus = m.mv2_plus - m.mv1_plus * m.mv1_plus;
  return m;
}

CrossMoments cross_moments(const ModelParams& params, const MarketState& state, double t, MomentBackend backend,
                           const OdeOptions& ode) {
  check_time(t);
  switch (backend) {
    case MomentBackend::closed_form: return closed_form::cross(params, state, t);
    case MomentBackend::paper_verbatim: return paper_verbatim::cross(params, state, t);
    case MomentBackend::ode: break;
  }
  const auto st = solve_moment_odes(params, state, t, ode);
  CrossMoments m;
  m.t = t;
  m.ms12 = st.ms12;
  m.mv12 = st.mv12;
  m.mv12_plus = st.mv12_plus;
  m.cov_plus = st.mv12_plus - st.mv1_plus[0] * st.mv1_plus[1];
  return m;
}

MomentSummary moment_summary(const ModelParams& params, const MarketState& state, double maturity,
                             MomentBackend backend, const OdeOptions& ode) {
  check_time(maturity);
  MomentSummary s;
  s.backend = backend;
  if (backend == MomentBackend::ode) {
    // one solve serves all blocks
    const auto st = solve_moment_odes(params, state, maturity, ode);
    s.x0 = {st.mv1_plus[0], st.mv1_plus[1], st.mr1_plus};
    s.var = {st.mv2_plus[0] - st.mv1_plus[0] * st.mv1_plus[0], st.mv2_plus[1] - st.mv1_plus[1] * st.mv1_plus[1],
             st.mr2_plus - st.mr1_plus * st.mr1_plus};
    s.cov12 = st.mv12_plus - st.mv1_plus[0] * st.mv1_plus[1];
    return s;
  }
  const auto r = corr_moments(params, state.rho0, maturity, backend, ode);
  const auto a = var_moments(params, state.v0[0], 0, maturity, backend, ode);
  const auto b = var_moments(params, state.v0[1], 1, maturity, backend, ode);
  const auto x = cross_moments(params, state, maturity, backend, ode);
  s.x0 = {a.mv1_plus, b.mv1_plus, r.mr1_plus};
  s.var = {a.var_plus, b.var_plus, r.var_plus};
  s.cov12 = x.cov_plus;
  return s;
}

}  // namespace xopt
