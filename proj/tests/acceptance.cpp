// One PASS/FAIL line per acceptance criterion; indented lines are diagnostics.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "test_common.hpp"
#include "xopt/cli.hpp"
#include "xopt/config.hpp"
#include "xopt/errors.hpp"
#include "xopt/margrabe.hpp"
#include "xopt/market_data.hpp"
#include "xopt/mc.hpp"
#include "xopt/moments.hpp"
#include "xopt/taylor.hpp"

using namespace xopt;
namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string summary;
  std::vector<std::string> notes;
};

template <class... A>
std::string fmt(const char* f, A... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

ModelParams frozen_params() { return ModelParams::from_ou({0.5, 0.5}, {0.0, 0.0}, 0.8, {0.8, 0.8, 0.0}); }

MarketState frozen_market() {
  MarketState m = reference_market();
  m.rho0 = 0.8;
  return m;
}

// ---------------------------------------------------------------------------

Outcome ac1() {
  Outcome o;
  const auto t0 = Clock::now();
  std::vector<testing::Scenario> sets{{reference_params(), reference_market()}};
  std::mt19937_64 rng(1001);
  for (int i = 0; i < 12; ++i) sets.push_back(testing::random_scenario(rng));

  SimConfig sc;
  sc.n_paths = 1'000'000;
  sc.seed = 777;

  double worst_ode = 0.0, worst_se = 0.0;
  int ode_bad = 0, mc_bad = 0, n_cmp = 0;
  for (std::size_t k = 0; k < sets.size(); ++k) {
    const auto& s = sets[k];
    const double T = s.market.maturity;
    const auto cf = moment_summary(s.params, s.market, T);
    const auto od = moment_summary(s.params, s.market, T, MomentBackend::ode, testing::tight_ode());
    sc.seed = 777 + k;
    // at least 100 steps per path: trapezoid sums of a rough path bias Var(V+) by ~1/(4 n^2)
    sc.n_steps = static_cast<std::size_t>(std::ceil(100.0 / T));
    const auto mc = estimate_integrated_moments(s.params, s.market, sc);
    const auto a = testing::stats(cf), b = testing::stats(od), sc_ = testing::stat_scales(cf, T);
    const McEstimate* m[7] = {&mc.mean[0], &mc.mean[1], &mc.mean[2], &mc.var[0], &mc.var[1], &mc.var[2], &mc.cov12};
    for (int j = 0; j < 7; ++j) {
      const double g = testing::rel_gap(a[j], b[j], sc_[j]);
      worst_ode = std::max(worst_ode, g);
      if (g > 1e-8) {
        ++ode_bad;
        o.notes.push_back(fmt("set %zu %s: closed %.12g ode %.12g", k, testing::stat_name(j), a[j], b[j]));
      }
      const double z = std::abs(m[j]->mean - a[j]) / m[j]->std_error;
      ++n_cmp;
      worst_se = std::max(worst_se, z);
      if (!(z <= 3.0)) {
        ++mc_bad;
        o.notes.push_back(fmt("set %zu (T=%g) %s: closed %.6g mc %.6g +- %.2g (%.3f SE)", k, T, testing::stat_name(j),
                              a[j], m[j]->mean, m[j]->std_error, z));
        // diagnostic only: an independent stream tells bias from a tail draw
        SimConfig again = sc;
        again.seed = 0x5eed0000 + k;
        const auto m2 = estimate_integrated_moments(s.params, s.market, again);
        const McEstimate* e2[7] = {&m2.mean[0], &m2.mean[1], &m2.mean[2], &m2.var[0], &m2.var[1], &m2.var[2], &m2.cov12};
        o.notes.push_back(fmt("    independent seed: mc %.6g +- %.2g (%.2f SE); verdict unchanged", e2[j]->mean,
                              e2[j]->std_error, (e2[j]->mean - a[j]) / e2[j]->std_error));
      }
    }
  }
  const double secs = seconds_since(t0);
  o.pass = ode_bad == 0 && mc_bad == 0 && secs < 300.0;
  o.summary = fmt("%zu sets, %d comparisons: worst closed/ODE rel gap %.2e (tol 1e-8), worst MC gap %.2f SE (tol 3), "
                  "%d outside; %.0f s (budget 300 s)",
                  sets.size(), n_cmp, worst_ode, worst_se, mc_bad, secs);
  return o;
}

Outcome ac2() {
  Outcome o;
  std::mt19937_64 rng(2002);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0, skipped = 0, bad = 0;
  double worst = 0.0, worst_x3 = 0.0;
  while (checked < 1000) {
    MargrabeInputs in;
    in.x = {0.01 + 1.5 * u(rng), 0.01 + 1.5 * u(rng), -0.95 + 1.9 * u(rng)};
    in.s0 = {50.0 + 100.0 * u(rng), 50.0 + 100.0 * u(rng)};
    in.rate = 0.1 * u(rng);
    in.maturity = 0.1 + 2.0 * u(rng);
    if (u(rng) < 0.5) in.discount_mode = DiscountMode::paper_eq9;
    const auto r = fd_check(in);
    if (!r.reliable) {
      ++skipped;
      continue;
    }
    ++checked;
    worst = std::max(worst, r.max_deviation);
    worst_x3 = std::max(worst_x3, r.x3_deviation);
    if (r.max_deviation > 1e-6) {
      ++bad;
      if (bad <= 5) o.notes.push_back(fmt("x=(%.4g, %.4g, %.4g): deviation %.2e", in.x[0], in.x[1], in.x[2], r.max_deviation));
    }
  }
  o.pass = bad == 0;
  o.summary = fmt("%d interior points (%d near v+=0 skipped): worst entry deviation %.2e (tol 1e-6), "
                  "x3 entries %.2e",
                  checked, skipped, worst, worst_x3);
  return o;
}

Outcome ac3() {
  Outcome o;
  const auto p = frozen_params();
  const auto m = frozen_market();
  const double taylor = price_taylor(p, m).price;
  const auto sum = moment_summary(p, m, m.maturity);
  // textbook Margrabe with the deterministic integrated variances, written out here
  const double v = sum.x0[0] + sum.x0[1] - 2.0 * std::sqrt(sum.x0[0] * sum.x0[1]) * sum.x0[2];
  const double d1 = std::log(m.s0[0] / m.s0[1]) / std::sqrt(v) + 0.5 * std::sqrt(v);
  const double bs = m.s0[0] * normal_cdf(d1) - m.s0[1] * normal_cdf(d1 - std::sqrt(v));
  SimConfig sc;
  sc.n_paths = 100'000;
  sc.n_steps = 500;
  sc.seed = 303;
  const auto mc = price_mc(p, m, sc);
  const double rel = std::abs(taylor - bs) / bs;
  const double z = std::abs(mc.estimate.mean - bs) / mc.estimate.std_error;
  o.pass = rel < 1e-14 && z <= 3.0;
  o.summary = fmt("Taylor %.15g vs Margrabe %.15g (rel %.1e); MC %.4f +- %.4f (%.2f SE)", taylor, bs, rel,
                  mc.estimate.mean, mc.estimate.std_error, z);
  o.notes.push_back("beta = 0, abar = 0, rho0 = level; V decays deterministically from V0 = 0.3 "
                    "(V0 = V_L with zero vol-of-vol would mean V = 0)");
  return o;
}

struct CliResult {
  int code;
  std::string out;
  double seconds;
};

CliResult cli_run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const auto t0 = Clock::now();
  const int c = cli::run(args, out, err);
  const double s = seconds_since(t0);
  if (c != 0) std::fprintf(stderr, "%s", err.str().c_str());
  return {c, out.str(), s};
}

Outcome ac4(const fs::path& work) {
  Outcome o;
  const std::string dir = (work / "ac4").string();
  CliResult taylor{1, "", 1e300};
  for (int i = 0; i < 5; ++i) {
    auto r = cli_run({"price", "--method", "taylor", "--out", dir});
    if (r.seconds < taylor.seconds) taylor = r;
  }
  const auto mc = cli_run({"price", "--method", "mc", "--paths", "100000", "--steps", "2000", "--out", dir});
  if (taylor.code != 0 || mc.code != 0) {
    o.pass = false;
    o.summary = "command failed";
    return o;
  }
  const double pt = json::parse(taylor.out).at("price");
  const auto jm = json::parse(mc.out);
  const double pm = jm.at("price"), se = jm.at("std_error");
  const double tol = std::max(3.0 * se, 0.01 * pm);
  const double speed = mc.seconds / taylor.seconds;
  o.pass = std::abs(pt - pm) <= tol && speed >= 100.0;
  o.summary = fmt("taylor %.4f vs mc %.4f +- %.4f: |gap| %.4f (%.2f%%), tol %.4f; speedup %.0fx (mc %.1f s, taylor %.2g s)",
                  pt, pm, se, std::abs(pt - pm), 100.0 * std::abs(pt - pm) / pm, tol, speed, mc.seconds,
                  taylor.seconds);

  // where the gap comes from
  SimConfig sc;
  sc.n_paths = 100'000;
  sc.n_steps = 2000;
  const auto b = simulate(reference_params(), reference_market(), sc);
  const auto cond = estimate_mean(path_values(b, reference_market(), Estimator::conditional));
  const auto pay = estimate_mean(path_values(b, reference_market(), Estimator::payoff));
  o.notes.push_back(fmt("same paths: E[C_M(V1+, V2+, rho+)] = %.4f +- %.4f, payoff %.4f +- %.4f", cond.mean,
                        cond.std_error, pay.mean, pay.std_error));
  o.notes.push_back(fmt("second-order truncation (taylor vs E[C_M]): %.4f (%.2f%%)", pt - cond.mean,
                        100.0 * (pt - cond.mean) / cond.mean));
  o.notes.push_back(fmt("spread variance 2 sqrt(V1+ V2+) rho+ vs the path integral of sigma1 sigma2 rho: "
                        "E[C_M] - payoff = %.4f (%.2f%%)",
                        cond.mean - pay.mean, 100.0 * (cond.mean - pay.mean) / pay.mean));
  return o;
}

Outcome ac5(const fs::path& work) {
  Outcome o;
  xopt::Config c;
  c.params = frozen_params();
  c.market = frozen_market();
  const fs::path cfg = work / "ac5_config.json";
  std::ofstream(cfg) << to_json(c).dump(2);
  const std::string dir = (work / "ac5").string();
  const auto r = cli_run({"price", "--method", "mc", "--config", cfg.string(), "--paths", "100000", "--steps", "500",
                          "--seed", "505", "--out", dir});
  const auto e9 = cli_run({"price", "--method", "taylor", "--discount-mode", "paper-eq9", "--config", cfg.string(),
                           "--out", dir});
  if (r.code != 0 || e9.code != 0) {
    o.pass = false;
    o.summary = "command failed";
    return o;
  }
  const auto j = json::parse(r.out);
  const auto jt = json::parse(e9.out);
  const double pm = j.at("price"), se = j.at("std_error");
  const auto& dd = j.at("discount_divergence");
  const double ps = dd.at("margrabe_standard"), pq = dd.at("margrabe_paper_eq9");
  const double factor = std::exp(-c.market.rate * c.market.maturity);
  const bool std_ok = std::abs(pm - ps) <= 3.0 * se;
  const bool eq9_off = std::abs(pm - pq) > 3.0 * se;
  const bool ratio_ok = std::abs(pq / ps - factor) < 1e-14 &&
                        std::abs(jt.at("discount_divergence").at("ratio").get<double>() - factor) < 1e-14;
  o.pass = std_ok && eq9_off && ratio_ok && jt.contains("discount_divergence");
  o.summary = fmt("mc %.4f +- %.4f; standard %.4f (%.2f SE), paper-eq9 %.4f (%.1f SE); eq9/standard = %.15g, "
                  "exp(-rT) = %.15g",
                  pm, se, ps, (pm - ps) / se, pq, (pm - pq) / se, pq / ps, factor);
  return o;
}

Outcome ac6() {
  Outcome o;
  SimConfig sc;
  sc.n_paths = 100'000;
  sc.n_steps = 500;
  sc.seed = 606;
  double prev_gap = 0.0, prev_se = 0.0;
  bool first = true;
  std::string line;
  for (double s : {1.0, 0.5, 0.25, 0.125}) {
    const auto p = reference_params().scaled_noise(s);
    const double t = price_taylor(p, reference_market()).price;
    const auto m = price_mc(p, reference_market(), sc);
    const double gap = std::abs(t - m.estimate.mean);
    const double se = m.estimate.std_error;
    line += fmt("s=%g: |%.4f - %.4f| = %.4f (se %.4f)  ", s, t, m.estimate.mean, gap, se);
    if (!first && gap > prev_gap + std::max(se, prev_se)) {
      o.pass = false;
      o.notes.push_back(fmt("gap grew at s=%g: %.4f -> %.4f", s, prev_gap, gap));
    }
    first = false;
    prev_gap = gap;
    prev_se = se;
  }
  o.summary = line;
  return o;
}

Outcome ac7() {
  Outcome o;
  // synthetic correlated pair
  std::mt19937_64 rng(707);
  std::normal_distribution<double> n(0.0, 0.01);
  PricePairSeries s;
  double a = 100.0, b = 50.0;
  for (int i = 0; i < 400; ++i) {
    s.dates.push_back(fmt("%04d-%02d-%02d", 2000 + i / 336, 1 + (i / 28) % 12, 1 + i % 28));
    s.p1.push_back(a);
    s.p2.push_back(b);
    const double e = n(rng);
    a *= std::exp(e + n(rng));
    b *= std::exp(0.6 * e + n(rng));
  }
  const auto sum = summary(s);
  const auto roll = rolling_correlation(s, 50);
  const auto roll_r = rolling_correlation(s, 50, RollingOn::returns);

  // brute force in long double, two-pass
  auto moments = [](const std::vector<long double>& x) {
    long double m = 0;
    for (auto v : x) m += v;
    m /= x.size();
    long double m2 = 0, m3 = 0, m4 = 0;
    for (auto v : x) {
      const long double d = v - m;
      m2 += d * d, m3 += d * d * d, m4 += d * d * d * d;
    }
    m2 /= x.size(), m3 /= x.size(), m4 /= x.size();
    return std::array<double, 4>{double(m), double(std::sqrt(m2)), double(m3 / std::pow(m2, 1.5L)), double(m4 / (m2 * m2))};
  };
  auto corr = [](const std::vector<long double>& x, const std::vector<long double>& y, std::size_t lo, std::size_t w) {
    long double mx = 0, my = 0;
    for (std::size_t i = lo; i < lo + w; ++i) mx += x[i], my += y[i];
    mx /= w, my /= w;
    long double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = lo; i < lo + w; ++i) {
      sxy += (x[i] - mx) * (y[i] - my);
      sxx += (x[i] - mx) * (x[i] - mx);
      syy += (y[i] - my) * (y[i] - my);
    }
    return double(sxy / std::sqrt(sxx * syy));
  };
  std::vector<long double> r1, r2, p1(s.p1.begin(), s.p1.end()), p2(s.p2.begin(), s.p2.end());
  for (std::size_t i = 1; i < s.size(); ++i) {
    r1.push_back(std::log(p1[i] / p1[i - 1]));
    r2.push_back(std::log(p2[i] / p2[i - 1]));
  }
  double worst = 0.0;
  auto track = [&](double got, double want) {
    worst = std::max(worst, std::abs(got - want) / std::max(1e-300, std::abs(want)));
  };
  const auto b1 = moments(r1), b2 = moments(r2);
  const MomentRow* rows[2] = {&sum.asset1, &sum.asset2};
  const std::array<double, 4>* bf[2] = {&b1, &b2};
  for (int k = 0; k < 2; ++k) {
    track(rows[k]->mean, (*bf[k])[0]);
    track(rows[k]->std, (*bf[k])[1]);
    track(rows[k]->skewness, (*bf[k])[2]);
    track(rows[k]->kurtosis, (*bf[k])[3]);
  }
  track(sum.price_correlation, corr(p1, p2, 0, p1.size()));
  track(sum.return_correlation, corr(r1, r2, 0, r1.size()));
  bool sizes = roll.size() == s.size() - 49 && roll_r.size() == r1.size() - 49;
  for (std::size_t k = 0; sizes && k < roll.size(); ++k) track(*roll[k].correlation, corr(p1, p2, k, 50));
  for (std::size_t k = 0; sizes && k < roll_r.size(); ++k) track(*roll_r[k].correlation, corr(r1, r2, k, 50));

  // kurtosis of a seeded Gaussian sample
  std::mt19937_64 g(7070);
  std::normal_distribution<double> z;
  std::vector<double> x(100'000);
  for (auto& v : x) v = z(g);
  const double kurt = moment_row(x).kurtosis;
  const double band = 3.0 * std::sqrt(24.0 / 1e5);

  o.pass = sizes && worst < 1e-12 && std::abs(kurt - 3.0) <= band;
  o.summary = fmt("%zu prices, %zu + %zu rolling windows: worst rel deviation from brute force %.1e (tol 1e-12, "
                  "rounding only); Gaussian kurtosis %.4f within 3 +- %.4f",
                  s.size(), roll.size(), roll_r.size(), worst, kurt, band);
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

Outcome ac8(const fs::path& work) {
  Outcome o;
  struct Case {
    std::string name;
    std::vector<std::string> args;
    std::vector<std::string> files;
  };
  const std::vector<Case> cases{
      {"price", {"price", "--method", "mc", "--paths", "20000", "--steps", "200", "--delta", "-o", "p.json"}, {"p.json"}},
      {"price_antithetic",
       {"price", "--method", "mc", "--paths", "20000", "--steps", "200", "--antithetic", "--estimator", "conditional",
        "-o", "p.json"},
       {"p.json"}},
      {"sweep", {"sweep", "--vary", "corr", "--grid", "-0.5:0.5:3", "--method", "mc", "--paths", "5000", "--steps", "100"},
       {"sweep.csv"}},
      {"simulate", {"simulate", "--paths", "3", "--steps", "100"}, {"prices.csv", "variances.csv", "correlation.csv"}},
      {"moments", {"moments", "--compare", "--paths", "20000", "--steps", "100"}, {"moments.json", "moments_compare.csv"}},
  };
  int checked = 0;
  for (const auto& c : cases) {
    const fs::path base = work / ("ac8_" + c.name);
    fs::remove_all(base);
    auto args = c.args;
    args.insert(args.end(), {"--out", (base / "orig").string()});
    setenv("XOPT_THREADS", "1", 1);
    if (cli_run(args).code != 0) {
      o.pass = false;
      o.notes.push_back(c.name + ": command failed");
      continue;
    }
    const fs::path manifest = base / "orig" / (c.args[0] + ".manifest.json");
    for (const char* threads : {"1", "2", "8"}) {
      setenv("XOPT_THREADS", threads, 1);
      const fs::path rdir = base / (std::string("replay_") + threads);
      if (cli_run({"replay", manifest.string(), "--out", rdir.string()}).code != 0) {
        o.pass = false;
        o.notes.push_back(c.name + ": replay failed");
        continue;
      }
      for (const auto& f : c.files) {
        ++checked;
        const std::string a = slurp(base / "orig" / f), b = slurp(rdir / f);
        if (a.empty() || a != b) {
          o.pass = false;
          o.notes.push_back(fmt("%s: %s differs at XOPT_THREADS=%s", c.name.c_str(), f.c_str(), threads));
        }
      }
    }
  }
  unsetenv("XOPT_THREADS");
  o.summary = fmt("%zu commands replayed from their manifests at 1, 2 and 8 workers; %d output files compared "
                  "byte for byte",
                  cases.size(), checked);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  // optional: run a subset, e.g. "acceptance 2 3"
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  const fs::path work = fs::temp_directory_path() / "xopt_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  const std::vector<std::pair<int, std::function<Outcome()>>> acs{
      {1, ac1},
      {2, ac2},
      {3, ac3},
      {4, [&] { return ac4(work); }},
      {5, [&] { return ac5(work); }},
      {6, ac6},
      {7, ac7},
      {8, [&] { return ac8(work); }},
  };
  int failed = 0;
  for (const auto& [id, fn] : acs) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto t0 = Clock::now();
    Outcome r;
    try {
      r = fn();
    } catch (const std::exception& e) {
      r.pass = false;
      r.summary = std::string("exception: ") + e.what();
    }
    if (!r.pass) ++failed;
    std::printf("AC%d %s  %s  [%.1f s]\n", id, r.pass ? "PASS" : "FAIL", r.summary.c_str(), seconds_since(t0));
    for (const auto& n : r.notes) std::printf("    %s\n", n.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
