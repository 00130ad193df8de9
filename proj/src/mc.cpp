#include "xopt/mc.hpp"

#include <algorithm>
#include <atomic>
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <string>
#include <thread>

#include "xopt/errors.hpp"

namespace xopt {

std::string_view to_string(Scheme s) noexcept {
  return s == Scheme::log_euler_exact_ou ? "log_euler_exact_ou" : "full_euler";
}

std::string_view to_string(Estimator e) noexcept {
  switch (e) {
    case Estimator::payoff: return "payoff";
    case Estimator::conditional: return "conditional";
    case Estimator::forward: return "forward";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view s) {
  if (s == "log_euler_exact_ou" || s == "log-euler-exact-ou") return Scheme::log_euler_exact_ou;
  if (s == "full_euler" || s == "full-euler") return Scheme::full_euler;
  throw ModelError("unknown scheme '" + std::string(s) + "'");
}

Estimator parse_estimator(std::string_view s) {
  if (s == "payoff") return Estimator::payoff;
  if (s == "conditional") return Estimator::conditional;
  if (s == "forward") return Estimator::forward;
  throw ModelError("unknown estimator '" + std::string(s) + "'");
}

McEstimate estimate_mean(const std::vector<double>& xs, bool paired) {
  McEstimate e;
  e.n = xs.size();
  if (xs.empty()) return e;
  double sum = 0.0;
  for (double x : xs) sum += x;
  e.mean = sum / static_cast<double>(xs.size());

  if (paired && xs.size() >= 4 && xs.size() % 2 == 0) {
    const std::size_t m = xs.size() / 2;
    double ss = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const double d = 0.5 * (xs[2 * k] + xs[2 * k + 1]) - e.mean;
      ss += d * d;
    }
    e.std_error = std::sqrt(ss / static_cast<double>(m - 1) / static_cast<double>(m));
    return e;
  }
  if (xs.size() < 2) return e;
  double ss = 0.0;
  for (double x : xs) ss += (x - e.mean) * (x - e.mean);
  e.std_error = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
  return e;
}

std::size_t steps_for(double maturity, std::size_t steps_per_year) {
  if (steps_per_year == 0) throw ModelError("n_steps must be at least 1");
  const double n = std::ceil(maturity * static_cast<double>(steps_per_year) - 1e-9);
  return std::max<std::size_t>(1, static_cast<std::size_t>(n));
}

unsigned resolve_threads(unsigned requested) {
  unsigned n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  if (const char* env = std::getenv("XOPT_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

namespace {

constexpr double kRhoBound = 1.0 - 1e-12;
constexpr double kMaxPathSteps = 1e12;
constexpr double kMaxRecordedPoints = 5e7;
constexpr std::size_t kBlock = 256;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
}

// Per-step constants shared by every path.
struct Stepper {
  double dt = 0.0;
  std::size_t n = 0;
  Scheme scheme = Scheme::log_euler_exact_ou;
  double rate = 0.0;

  // sigma transition: sigma' = a_j sigma + sd_j (eps_j), eps correlated by r_eff
  double a[2]{}, sd[2]{}, r_eff = 0.0, r_perp = 0.0;

  // rho transition
  double gamma = 0.0, level = 0.0, avol = 0.0;
  double eg = 0.0, ek = 0.0, a1 = 0.0, a2c = 0.0;

  Stepper(const ModelParams& p, const MarketState& s, const SimConfig& cfg) {
    n = steps_for(s.maturity, cfg.n_steps);
    dt = s.maturity / static_cast<double>(n);
    scheme = cfg.scheme;
    rate = s.rate;
    gamma = p.gamma_bar;
    level = p.gamma_level;
    avol = p.alpha_bar;

    if (scheme == Scheme::log_euler_exact_ou) {
      for (int j = 0; j < 2; ++j) {
        a[j] = std::exp(-p.alpha[j] * dt);
        sd[j] = p.beta[j] * std::sqrt(-std::expm1(-2.0 * p.alpha[j] * dt) / (2.0 * p.alpha[j]));
      }
      const double asum = p.alpha[0] + p.alpha[1];
      const double cov = p.beta[0] * p.beta[1] * p.rho_v * (-std::expm1(-asum * dt)) / asum;
      r_eff = (sd[0] > 0.0 && sd[1] > 0.0) ? std::clamp(cov / (sd[0] * sd[1]), -1.0, 1.0) : 0.0;
    } else {
      for (int j = 0; j < 2; ++j) {
        a[j] = 1.0 - p.alpha[j] * dt;
        sd[j] = p.beta[j] * std::sqrt(dt);
      }
      r_eff = p.rho_v;
    }
    r_perp = std::sqrt(std::max(0.0, 1.0 - r_eff * r_eff));

    // exact conditional mean and second moment of rho over one step:
    //   E[rho'] = L + (x - L) eg
    //   E[rho'^2] = a1 + a2(x) eg + (x^2 - a1 - a2(x)) ek, a2(x) = a2c (x - L)
    const double a2v = avol * avol;
    const double k = 2.0 * gamma + a2v;
    eg = std::exp(-gamma * dt);
    ek = std::exp(-k * dt);
    a1 = k > 0.0 ? (2.0 * gamma * level * level + a2v) / k : 0.0;
    a2c = (gamma + a2v) > 0.0 ? 2.0 * gamma * level / (gamma + a2v) : 0.0;
  }

  // Exact-moment step: the draw has the exact one-step conditional mean and
  // variance of rho. Well inside (-1, 1) a Gaussian is used; within 8 sd of
  // the boundary, a scaled Beta drawn as (G_a - G_b) / (G_a + G_b), which
  // cannot leave the interval. Only the Euler scheme needs the hard clamp.
  template <class Eng, class Z>
  bool step_rho(double& rho, Eng& eng, std::gamma_distribution<double>& gamma_dist, Z&& z) const {
    using GammaParam = std::gamma_distribution<double>::param_type;
    double next;
    if (scheme == Scheme::log_euler_exact_ou) {
      const double mean = level + (rho - level) * eg;
      const double a2 = a2c * (rho - level);
      const double m2 = a1 + a2 * eg + (rho * rho - a1 - a2) * ek;
      const double var = m2 - mean * mean;
      const double room = (1.0 - mean) * (1.0 + mean);
      if (!(var > 0.0) || !(room > 0.0)) {
        next = mean;
      } else if (1.0 - std::abs(mean) > 8.0 * std::sqrt(var)) {
        next = mean + std::sqrt(var) * z();
      } else {
        // Beta on [0, 1] with mean (1 + mean)/2 and variance var/4
        const double kappa = std::max(room / var - 1.0, 1e-8);
        const double ga = gamma_dist(eng, GammaParam(0.5 * (1.0 + mean) * kappa, 1.0));
        const double gb = gamma_dist(eng, GammaParam(0.5 * (1.0 - mean) * kappa, 1.0));
        const double sum = ga + gb;
        next = sum > 0.0 ? (ga - gb) / sum : mean;
        rho = std::clamp(next, -1.0, 1.0);
        return false;
      }
    } else {
      next = rho + gamma * (level - rho) * dt + avol * std::sqrt(std::max(0.0, 1.0 - rho * rho) * dt) * z();
    }
    if (next > kRhoBound || next < -kRhoBound) {
      rho = std::clamp(next, -kRhoBound, kRhoBound);
      return true;
    }
    rho = next;
    return false;
  }
};

using Engine = boost::random::mt19937_64;
using Normal = boost::random::normal_distribution<double>;

struct PathOut {
  Pair log_growth{};
  Vec3 x_plus{};
  std::size_t clamped = 0;
};

// Simulates one path. When rec_* pointers are non-null, writes n + 1 grid values.
PathOut run_path(const Stepper& st, const MarketState& s, Engine& eng, double sign, Pair* rec_s, Pair* rec_sigma,
                 double* rec_rho, Pair* rec_vp, double* rec_rhop) {
  Normal normal;
  std::gamma_distribution<double> gamma_dist;
  auto z = [&] { return sign * normal(eng); };
  const bool record = rec_s != nullptr;
  const double dt = st.dt;

  const Pair sig0 = s.sigma0();
  double sg1 = sig0[0], sg2 = sig0[1];
  double rho = s.rho0;
  double v1p = 0.0, v2p = 0.0, rhop = 0.0;
  // left-point sums of the conditional log-price covariance
  double A = 0.0, B = 0.0, K = 0.0;
  double ls1 = 0.0, ls2 = 0.0;
  PathOut out;

  if (record) {
    rec_s[0] = s.s0;
    rec_sigma[0] = {sg1, sg2};
    rec_rho[0] = rho;
    rec_vp[0] = {0.0, 0.0};
    rec_rhop[0] = 0.0;
  }

  for (std::size_t i = 0; i < st.n; ++i) {
    const double v1 = sg1 * sg1, v2 = sg2 * sg2;
    const double vol1 = std::abs(sg1), vol2 = std::abs(sg2);
    const double e1 = z();
    const double e2 = z();

    if (record) {
      const double y1 = z();
      const double y2 = z();
      const double sq = std::sqrt(dt);
      ls1 += (st.rate - 0.5 * v1) * dt + vol1 * sq * y1;
      ls2 += (st.rate - 0.5 * v2) * dt + vol2 * sq * (rho * y1 + std::sqrt(std::max(0.0, 1.0 - rho * rho)) * y2);
    } else {
      A += v1 * dt;
      B += v2 * dt;
      K += vol1 * vol2 * rho * dt;
    }

    const double rho_old = rho;
    sg1 = st.a[0] * sg1 + st.sd[0] * e1;
    sg2 = st.a[1] * sg2 + st.sd[1] * (st.r_eff * e1 + st.r_perp * e2);
    if (st.step_rho(rho, eng, gamma_dist, z)) ++out.clamped;

    v1p += 0.5 * dt * (v1 + sg1 * sg1);
    v2p += 0.5 * dt * (v2 + sg2 * sg2);
    rhop += 0.5 * dt * (rho_old + rho);

    if (record) {
      rec_s[i + 1] = {s.s0[0] * std::exp(ls1), s.s0[1] * std::exp(ls2)};
      rec_sigma[i + 1] = {sg1, sg2};
      rec_rho[i + 1] = rho;
      rec_vp[i + 1] = {v1p, v2p};
      rec_rhop[i + 1] = rhop;
    }
  }

  if (!record) {
    // terminal log-prices are Gaussian given the frozen per-step vols and correlation
    const double T = st.dt * static_cast<double>(st.n);
    const double y1 = z();
    const double y2 = z();
    const double sa = std::sqrt(A);
    const double load = sa > 0.0 ? K / sa : 0.0;
    const double rest = std::sqrt(std::max(0.0, B - load * load));
    ls1 = st.rate * T - 0.5 * A + sa * y1;
    ls2 = st.rate * T - 0.5 * B + load * y1 + rest * y2;
  }

  out.log_growth = {ls1, ls2};
  out.x_plus = {v1p, v2p, rhop};
  return out;
}

}  // namespace

PathBatch simulate(const ModelParams& params, const MarketState& state, const SimConfig& cfg) {
  require_valid(params, state);
  if (cfg.n_paths == 0) throw ModelError("n_paths must be at least 1");
  if (cfg.antithetic && cfg.n_paths % 2 != 0) throw ModelError("antithetic sampling needs an even n_paths");
  const Stepper st(params, state, cfg);
  const double work = static_cast<double>(cfg.n_paths) * static_cast<double>(st.n);
  if (work > kMaxPathSteps) {
    throw ModelError("n_paths * steps = " + std::to_string(work) + " exceeds the budget of " +
                     std::to_string(kMaxPathSteps));
  }
  const std::size_t n_times = st.n + 1;
  if (cfg.record_paths && static_cast<double>(cfg.n_paths) * static_cast<double>(n_times) > kMaxRecordedPoints) {
    throw ModelError("recorded trajectories would hold more than " + std::to_string(kMaxRecordedPoints) +
                     " grid points; reduce paths or steps");
  }

  PathBatch b;
  b.n_paths = cfg.n_paths;
  b.seed = cfg.seed;
  b.antithetic = cfg.antithetic;
  b.rng = "mt19937_64 per path stream, seed = splitmix64(seed ^ splitmix64(stream)), stream = path index" +
          std::string(cfg.antithetic ? " / 2 (odd paths negate normals)" : "") + "; ziggurat normals";
  b.times.resize(n_times);
  for (std::size_t i = 0; i < n_times; ++i) b.times[i] = st.dt * static_cast<double>(i);
  b.times.back() = state.maturity;
  b.log_growth.resize(cfg.n_paths);
  b.x_plus.resize(cfg.n_paths);
  if (cfg.record_paths) {
    const std::size_t total = cfg.n_paths * n_times;
    b.s.resize(total);
    b.sigma.resize(total);
    b.rho.resize(total);
    b.v_plus.resize(total);
    b.rho_plus.resize(total);
  }
  std::vector<std::size_t> clamped(cfg.n_paths, 0);

  const std::size_t n_blocks = (cfg.n_paths + kBlock - 1) / kBlock;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t blk = next.fetch_add(1);
      if (blk >= n_blocks) return;
      const std::size_t lo = blk * kBlock;
      const std::size_t hi = std::min(cfg.n_paths, lo + kBlock);
      for (std::size_t p = lo; p < hi; ++p) {
        const std::uint64_t stream = cfg.antithetic ? p / 2 : p;
        const double sign = (cfg.antithetic && p % 2 == 1) ? -1.0 : 1.0;
        Engine eng(stream_seed(cfg.seed, stream));
        const std::size_t off = p * n_times;
        const PathOut o = cfg.record_paths
                              ? run_path(st, state, eng, sign, &b.s[off], &b.sigma[off], &b.rho[off],
                                         &b.v_plus[off], &b.rho_plus[off])
                              : run_path(st, state, eng, sign, nullptr, nullptr, nullptr, nullptr, nullptr);
        b.log_growth[p] = o.log_growth;
        b.x_plus[p] = o.x_plus;
        clamped[p] = o.clamped;
      }
    }
  };

  const unsigned n_threads = std::min<std::size_t>(resolve_threads(cfg.threads), n_blocks);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }

  for (std::size_t c : clamped) b.clamped_steps += c;
  b.rho_steps = cfg.n_paths * st.n;
  return b;
}

std::vector<double> path_values(const PathBatch& batch, const MarketState& state, Estimator estimator) {
  const double disc = std::exp(-state.rate * state.maturity);
  const double a = state.units[0] * state.s0[0];
  const double m = state.units[1] * state.s0[1];
  std::vector<double> out(batch.n_paths);
  MargrabeInputs in;
  in.s0 = state.s0;
  in.rate = state.rate;
  in.maturity = state.maturity;
  in.units = state.units;
  in.discount_mode = DiscountMode::standard;
  for (std::size_t p = 0; p < batch.n_paths; ++p) {
    const Pair g = batch.log_growth[p];
    switch (estimator) {
      case Estimator::payoff:
        out[p] = disc * std::max(a * std::exp(g[0]) - m * std::exp(g[1]), 0.0);
        break;
      case Estimator::forward:
        out[p] = disc * (a * std::exp(g[0]) - m * std::exp(g[1]));
        break;
      case Estimator::conditional: {
        const Vec3 x = batch.x_plus[p];
        in.x = {std::max(x[0], 0.0), std::max(x[1], 0.0), x[2]};
        out[p] = margrabe_price(in);
        break;
      }
    }
  }
  return out;
}

McPrice price_mc(const ModelParams& params, const MarketState& state, const SimConfig& cfg, Estimator estimator) {
  SimConfig c = cfg;
  c.record_paths = false;
  const PathBatch b = simulate(params, state, c);
  McPrice r;
  r.estimate = estimate_mean(path_values(b, state, estimator), b.antithetic);
  r.estimator = estimator;
  r.steps = b.times.size() - 1;
  r.clamp_fraction = b.clamp_fraction();
  if (!std::isfinite(r.estimate.mean)) throw NumericalError("Monte Carlo price is not finite");
  return r;
}

McEstimate delta_mc(const ModelParams& params, const MarketState& state, const SimConfig& cfg, std::size_t leg,
                    double rel_bump, Estimator estimator) {
  if (leg > 1) throw ModelError("leg must be 0 or 1");
  if (!(rel_bump > 0.0)) throw ModelError("bump must be positive");
  SimConfig c = cfg;
  c.record_paths = false;
  const PathBatch b = simulate(params, state, c);
  const double h = rel_bump * state.s0[leg];
  MarketState up = state, dn = state;
  up.s0[leg] += h;
  dn.s0[leg] -= h;
  const auto vu = path_values(b, up, estimator);
  const auto vd = path_values(b, dn, estimator);
  std::vector<double> d(vu.size());
  for (std::size_t p = 0; p < d.size(); ++p) d[p] = (vu[p] - vd[p]) / (2.0 * h);
  return estimate_mean(d, b.antithetic);
}

McMoments integrated_moments(const PathBatch& b) {
  const std::size_t n = b.n_paths;
  McMoments r;
  r.steps = b.times.empty() ? 0 : b.times.size() - 1;
  r.clamp_fraction = b.clamp_fraction();
  const double dn = static_cast<double>(n);

  double mu[3] = {0.0, 0.0, 0.0};
  for (const Vec3& x : b.x_plus)
    for (int j = 0; j < 3; ++j) mu[j] += x[j];
  for (double& m : mu) m /= dn;

  // central moments in path order
  double m2[3] = {}, m4[3] = {}, c11 = 0.0, c22 = 0.0;
  for (const Vec3& x : b.x_plus) {
    for (int j = 0; j < 3; ++j) {
      const double d = x[j] - mu[j];
      m2[j] += d * d;
      m4[j] += d * d * d * d;
    }
    const double d0 = x[0] - mu[0], d1 = x[1] - mu[1];
    c11 += d0 * d1;
    c22 += d0 * d0 * d1 * d1;
  }
  for (int j = 0; j < 3; ++j) {
    const double var = n > 1 ? m2[j] / (dn - 1.0) : 0.0;
    const double pm2 = m2[j] / dn, pm4 = m4[j] / dn;
    r.mean[j] = {mu[j], std::sqrt(var / dn), n};
    r.var[j] = {var, std::sqrt(std::max(0.0, pm4 - pm2 * pm2) / dn), n};
  }
  const double cov = n > 1 ? c11 / (dn - 1.0) : 0.0;
  const double pc = c11 / dn;
  r.cov12 = {cov, std::sqrt(std::max(0.0, c22 / dn - pc * pc) / dn), n};
  return r;
}

McMoments estimate_integrated_moments(const ModelParams& params, const MarketState& state, const SimConfig& cfg) {
  SimConfig c = cfg;
  c.record_paths = false;
  return integrated_moments(simulate(params, state, c));
}

}  // namespace xopt
