#include "xopt/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "xopt/config.hpp"
#include "xopt/errors.hpp"
#include "xopt/market_data.hpp"
#include "xopt/mc.hpp"
#include "xopt/taylor.hpp"

namespace xopt::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string num(double x) {
  if (!std::isfinite(x)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void write_text(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << text;
}

// Options shared by every subcommand.
struct Common {
  std::string config_path;
  std::string out_dir = ".";
  std::string manifest_path;
};

struct McFlags {
  std::size_t paths = 100'000;
  std::size_t steps = 2000;
  std::uint64_t seed = SimConfig{}.seed;
  std::string scheme = "log_euler_exact_ou";
  bool antithetic = false;
  unsigned threads = 0;

  [[nodiscard]] SimConfig sim() const {
    SimConfig c;
    c.n_paths = paths;
    c.n_steps = steps;
    c.seed = seed;
    c.scheme = parse_scheme(scheme);
    c.antithetic = antithetic;
    c.threads = threads;
    return c;
  }
};

void add_mc_flags(CLI::App* cmd, McFlags& f) {
  cmd->add_option("--paths", f.paths, "Monte Carlo paths")->capture_default_str();
  cmd->add_option("--steps", f.steps, "time steps per year")->capture_default_str();
  cmd->add_option("--seed", f.seed, "64-bit seed")->capture_default_str();
  cmd->add_option("--scheme", f.scheme, "log_euler_exact_ou | full_euler")->capture_default_str();
  cmd->add_flag("--antithetic", f.antithetic, "antithetic pairs");
  cmd->add_option("--threads", f.threads, "worker threads (0 = all cores; XOPT_THREADS caps)");
}

json mc_json(const McFlags& f) {
  return {{"paths", f.paths}, {"steps_per_year", f.steps}, {"seed", f.seed}, {"scheme", f.scheme},
          {"antithetic", f.antithetic}};
}

json summary_json(const MomentSummary& m) {
  return {{"backend", std::string(to_string(m.backend))},
          {"mean_v1_plus", m.x0[0]},
          {"mean_v2_plus", m.x0[1]},
          {"mean_rho_plus", m.x0[2]},
          {"var_v1_plus", m.var[0]},
          {"var_v2_plus", m.var[1]},
          {"var_rho_plus", m.var[2]},
          {"cov_v1v2_plus", m.cov12}};
}

json estimate_json(const McEstimate& e) { return {{"mean", e.mean}, {"std_error", e.std_error}, {"n", e.n}}; }

TaylorOptions taylor_opts(const std::string& backend, const std::string& mode) {
  TaylorOptions o;
  o.backend = parse_backend(backend);
  o.discount_mode = parse_discount_mode(mode);
  return o;
}

// Grid "a:b:n" -> n points from a to b inclusive.
std::vector<double> parse_grid(const std::string& g) {
  std::vector<std::string> parts;
  std::stringstream ss(g);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3) throw UsageError("--grid must look like a:b:n, got '" + g + "'");
  double a = 0.0, b = 0.0;
  long n = 0;
  try {
    std::size_t pos = 0;
    a = std::stod(parts[0], &pos);
    if (pos != parts[0].size()) throw std::invalid_argument("a");
    b = std::stod(parts[1], &pos);
    if (pos != parts[1].size()) throw std::invalid_argument("b");
    n = std::stol(parts[2], &pos);
    if (pos != parts[2].size()) throw std::invalid_argument("n");
  } catch (const std::exception&) {
    throw UsageError("--grid must look like a:b:n, got '" + g + "'");
  }
  if (n < 1) throw UsageError("--grid needs n >= 1");
  if (a > b) throw UsageError("--grid needs a <= b, got " + parts[0] + " > " + parts[1]);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return out;
}

struct Run {
  std::string command;
  std::vector<std::string> args;
  Config config;
  json seeds = json::array();
  std::vector<std::string> outputs;
  std::string started_at;
  std::chrono::steady_clock::time_point t0;
  bool deterministic = true;
};

void write_manifest(const Run& run, const Common& common) {
  const fs::path path = common.manifest_path.empty() ? fs::path(common.out_dir) / (run.command + ".manifest.json")
                                                     : fs::path(common.manifest_path);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - run.t0).count();
  json m = {{"schema_version", kSchemaVersion},
            {"kind", "run_manifest"},
            {"command", run.command},
            {"args", run.args},
            {"config", to_json(run.config)},
            {"seeds", run.seeds},
            {"tool_version", kVersion},
            {"started_at", run.started_at},
            {"finished_at", utc_now()},
            {"elapsed_seconds", elapsed},
            {"deterministic", run.deterministic},
            {"outputs", run.outputs}};
  write_text(path, m.dump(2) + "\n");
}

void emit(Run& run, const Common& common, std::ostream& out, const json& j, const std::string& file) {
  const std::string text = j.dump(2) + "\n";
  out << text;
  if (!file.empty()) {
    const fs::path p = fs::path(common.out_dir) / file;
    write_text(p, text);
    run.outputs.push_back(p.string());
  }
}

double price_once(const std::string& method, const Config& cfg, const TaylorOptions& topt, const McFlags& mc,
                  const std::string& estimator, double* se) {
  if (se) *se = 0.0;
  if (method == "taylor") return price_taylor(cfg.params, cfg.market, topt).price;
  if (method == "margrabe-const") return price_margrabe_const(cfg.params, cfg.market, topt).price;
  const McPrice p = price_mc(cfg.params, cfg.market, mc.sim(), parse_estimator(estimator));
  if (se) *se = p.estimate.std_error;
  return p.estimate.mean;
}

void check_method(const std::string& m) {
  if (m != "taylor" && m != "mc" && m != "margrabe-const")
    throw UsageError("--method must be taylor, mc or margrabe-const");
}

}  // namespace

namespace {

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
             const std::optional<Config>& forced) {
  CLI::App app{"Exchange options under stochastic volatility and correlation"};
  app.name("xopt");
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", common.config_path, "model JSON file (defaults to the reference set)");
    cmd->add_option("--out", common.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--manifest", common.manifest_path, "manifest path (default <out>/<command>.manifest.json)");
  };

  // price
  auto* price = app.add_subcommand("price", "price the exchange option");
  add_common(price);
  std::string method = "taylor", mode = "standard", backend = "closed-form", estimator = "payoff", price_file;
  bool with_delta = false;
  McFlags price_mc_flags;
  price->add_option("--method", method, "taylor | mc | margrabe-const")->capture_default_str();
  price->add_option("--discount-mode", mode, "standard | paper-eq9")->capture_default_str();
  price->add_option("--backend", backend, "closed-form | ode | paper-verbatim")->capture_default_str();
  price->add_option("--estimator", estimator, "mc estimator: payoff | conditional")->capture_default_str();
  price->add_flag("--delta", with_delta, "also report deltas for both legs");
  price->add_option("-o,--output", price_file, "also write the report to this file under --out");
  add_mc_flags(price, price_mc_flags);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "price along a grid of initial variance or correlation");
  add_common(sweep);
  std::string vary, grid, sweep_method = "taylor", sweep_file = "sweep.csv", sweep_mode = "standard",
                            sweep_backend = "closed-form", sweep_estimator = "payoff";
  McFlags sweep_mc;
  sweep->add_option("--vary", vary, "vol (initial squared vols) | corr (initial correlation)")->required();
  sweep->add_option("--grid", grid, "a:b:n")->required();
  sweep->add_option("--method", sweep_method, "taylor | mc | margrabe-const")->capture_default_str();
  sweep->add_option("--discount-mode", sweep_mode, "standard | paper-eq9")->capture_default_str();
  sweep->add_option("--backend", sweep_backend, "moment backend")->capture_default_str();
  sweep->add_option("--estimator", sweep_estimator, "mc estimator")->capture_default_str();
  sweep->add_option("-o,--output", sweep_file, "CSV name under --out")->capture_default_str();
  add_mc_flags(sweep, sweep_mc);

  // simulate
  auto* simulate_cmd = app.add_subcommand("simulate", "write simulated trajectories");
  add_common(simulate_cmd);
  McFlags sim_flags;
  sim_flags.paths = 1;
  add_mc_flags(simulate_cmd, sim_flags);

  // moments
  auto* moments = app.add_subcommand("moments", "moments of the integrated variances and correlation");
  add_common(moments);
  std::string mom_backend = "closed-form";
  bool compare = false;
  McFlags mom_mc;
  mom_mc.steps = 250;
  moments->add_option("--backend", mom_backend, "closed-form | ode | paper-verbatim")->capture_default_str();
  moments->add_flag("--compare", compare, "tabulate every backend against Monte Carlo");
  add_mc_flags(moments, mom_mc);

  // analyze
  auto* analyze = app.add_subcommand("analyze", "return moments and rolling correlations of a price pair");
  add_common(analyze);
  std::string csv_path;
  std::size_t window = 50;
  analyze->add_option("csv", csv_path, "CSV with header date,price1,price2")->required();
  analyze->add_option("--window", window, "rolling window length")->capture_default_str();

  // replay
  auto* replay = app.add_subcommand("replay", "re-run the command recorded in a manifest");
  std::string replay_manifest, replay_out;
  replay->add_option("manifest", replay_manifest, "manifest JSON")->required();
  replay->add_option("--out", replay_out, "output directory for the re-run");

  std::vector<std::string> argv_store{"xopt"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  if (replay->parsed()) {
    std::ifstream f(replay_manifest);
    if (!f) throw UsageError("cannot open manifest " + replay_manifest);
    json m;
    try {
      f >> m;
    } catch (const json::parse_error& e) {
      throw UsageError(std::string("manifest is not valid JSON: ") + e.what());
    }
    if (!m.contains("args") || !m.contains("config")) throw UsageError("manifest lacks args/config");
    auto rargs = m.at("args").get<std::vector<std::string>>();
    if (!replay_out.empty()) {
      std::vector<std::string> fixed;
      for (std::size_t i = 0; i < rargs.size(); ++i) {
        if ((rargs[i] == "--out" || rargs[i] == "--manifest") && i + 1 < rargs.size()) {
          ++i;
          continue;
        }
        fixed.push_back(rargs[i]);
      }
      fixed.push_back("--out");
      fixed.push_back(replay_out);
      rargs = fixed;
    }
    return dispatch(rargs, out, err, parse_config(m.at("config")));
  }

  Run run;
  run.args = args;
  run.started_at = utc_now();
  run.t0 = std::chrono::steady_clock::now();
  run.config = forced ? *forced : (common.config_path.empty() ? Config{} : load_config(common.config_path));
  fs::create_directories(common.out_dir);
  const Config& cfg = run.config;

  if (price->parsed()) {
    run.command = "price";
    check_method(method);
    const TaylorOptions topt = taylor_opts(backend, mode);
    json r = {{"schema_version", kSchemaVersion}, {"kind", "price_report"}, {"method", method},
              {"discount_mode", std::string(to_string(topt.discount_mode))}, {"config", to_json(cfg)},
              {"tool_version", kVersion}};
    if (method == "mc") {
      const SimConfig sc = price_mc_flags.sim();
      const Estimator est = parse_estimator(estimator);
      const McPrice p = price_mc(cfg.params, cfg.market, sc, est);
      run.seeds.push_back(sc.seed);
      r["price"] = p.estimate.mean;
      r["std_error"] = p.estimate.std_error;
      r["estimator"] = std::string(to_string(est));
      r["mc"] = mc_json(price_mc_flags);
      r["mc"]["steps"] = p.steps;
      r["mc"]["clamp_fraction"] = p.clamp_fraction;
      // the simulated price is the model price; compare it with the
      // frozen-moment Margrabe price under both discount conventions
      TaylorOptions s = topt, q = topt;
      s.discount_mode = DiscountMode::standard;
      q.discount_mode = DiscountMode::paper_eq9;
      const double ps = price_margrabe_const(cfg.params, cfg.market, s).price;
      const double pq = price_margrabe_const(cfg.params, cfg.market, q).price;
      const double se = p.estimate.std_error > 0.0 ? p.estimate.std_error : std::nan("");
      r["discount_divergence"] = {{"margrabe_standard", ps},
                                  {"margrabe_paper_eq9", pq},
                                  {"factor", std::exp(-cfg.market.rate * cfg.market.maturity)},
                                  {"gap_standard_in_se", (p.estimate.mean - ps) / se},
                                  {"gap_paper_eq9_in_se", (p.estimate.mean - pq) / se}};
      if (with_delta) {
        json d = json::array();
        for (std::size_t leg = 0; leg < 2; ++leg) {
          const McEstimate e = delta_mc(cfg.params, cfg.market, sc, leg, 1e-3, est);
          d.push_back({{"leg", leg + 1}, {"delta", e.mean}, {"std_error", e.std_error},
                       {"step", 1e-3 * cfg.market.s0[leg]}});
        }
        r["deltas"] = d;
      }
    } else {
      const PriceReport rep = method == "taylor" ? price_taylor(cfg.params, cfg.market, topt)
                                                 : price_margrabe_const(cfg.params, cfg.market, topt);
      r["price"] = rep.price;
      r["backend"] = std::string(to_string(topt.backend));
      r["moments"] = summary_json(rep.moments);
      if (method == "taylor") {
        const auto& b = rep.breakdown;
        r["breakdown"] = {{"base", b.base},           {"term_var1", b.term_var1},
                          {"term_var2", b.term_var2}, {"term_varrho", b.term_varrho},
                          {"term_cov12", b.term_cov12}, {"total", b.total}};
      }
      TaylorOptions other = topt;
      other.discount_mode =
          topt.discount_mode == DiscountMode::standard ? DiscountMode::paper_eq9 : DiscountMode::standard;
      const double p_other = method == "taylor" ? price_taylor(cfg.params, cfg.market, other).price
                                                : price_margrabe_const(cfg.params, cfg.market, other).price;
      const double p_std = topt.discount_mode == DiscountMode::standard ? rep.price : p_other;
      const double p_eq9 = topt.discount_mode == DiscountMode::standard ? p_other : rep.price;
      r["discount_divergence"] = {{"standard", p_std},
                                  {"paper_eq9", p_eq9},
                                  {"factor", std::exp(-cfg.market.rate * cfg.market.maturity)},
                                  {"ratio", p_eq9 / p_std}};
      if (with_delta) {
        json d = json::array();
        for (std::size_t leg = 0; leg < 2; ++leg) {
          const DeltaReport dr = delta_taylor(cfg.params, cfg.market, leg, topt);
          d.push_back({{"leg", leg + 1}, {"delta", dr.delta}, {"step", dr.step}});
        }
        r["deltas"] = d;
      }
    }
    emit(run, common, out, r, price_file);
  } else if (sweep->parsed()) {
    run.command = "sweep";
    check_method(sweep_method);
    if (vary != "vol" && vary != "corr") throw UsageError("--vary must be vol or corr");
    const auto values = parse_grid(grid);
    const TaylorOptions topt = taylor_opts(sweep_backend, sweep_mode);
    std::string csv = vary == "vol" ? "v0,price,std_error\n" : "rho0,price,std_error\n";
    for (double v : values) {
      Config c = cfg;
      if (vary == "vol") {
        c.market.v0 = {v, v};
      } else {
        c.market.rho0 = v;
      }
      require_valid(c.params, c.market);
      double se = 0.0;
      const double p = price_once(sweep_method, c, topt, sweep_mc, sweep_estimator, &se);
      csv += num(v) + "," + num(p) + "," + num(se) + "\n";
    }
    if (sweep_method == "mc") run.seeds.push_back(sweep_mc.seed);
    const fs::path p = fs::path(common.out_dir) / sweep_file;
    write_text(p, csv);
    run.outputs.push_back(p.string());
    out << csv;
  } else if (simulate_cmd->parsed()) {
    run.command = "simulate";
    if (sim_flags.paths == 0) throw UsageError("--paths must be at least 1");
    if (sim_flags.steps == 0) throw UsageError("--steps must be at least 1");
    SimConfig sc = sim_flags.sim();
    sc.record_paths = true;
    const PathBatch b = simulate(cfg.params, cfg.market, sc);
    run.seeds.push_back(sc.seed);
    std::string prices = "path,t,s1,s2\n", vols = "path,t,v1,v2\n", corr = "path,t,rho\n";
    const std::size_t nt = b.times.size();
    for (std::size_t p = 0; p < b.n_paths; ++p) {
      for (std::size_t i = 0; i < nt; ++i) {
        const std::size_t k = p * nt + i;
        const std::string head = std::to_string(p) + "," + num(b.times[i]) + ",";
        prices += head + num(b.s[k][0]) + "," + num(b.s[k][1]) + "\n";
        vols += head + num(b.sigma[k][0] * b.sigma[k][0]) + "," + num(b.sigma[k][1] * b.sigma[k][1]) + "\n";
        corr += head + num(b.rho[k]) + "\n";
      }
    }
    for (auto [name, text] : {std::pair{"prices.csv", &prices}, {"variances.csv", &vols}, {"correlation.csv", &corr}}) {
      const fs::path p = fs::path(common.out_dir) / name;
      write_text(p, *text);
      run.outputs.push_back(p.string());
    }
    json r = {{"schema_version", kSchemaVersion}, {"kind", "simulation"}, {"paths", b.n_paths},
              {"steps", nt - 1}, {"seed", b.seed}, {"rng", b.rng}, {"clamp_fraction", b.clamp_fraction()},
              {"files", run.outputs}};
    out << r.dump(2) << "\n";
  } else if (moments->parsed()) {
    run.command = "moments";
    const MomentBackend be = parse_backend(mom_backend);
    const double T = cfg.market.maturity;
    const MomentSummary chosen = moment_summary(cfg.params, cfg.market, T, be);
    json r = {{"schema_version", kSchemaVersion}, {"kind", "moment_summary"}, {"maturity", T},
              {"summary", summary_json(chosen)}, {"config", to_json(cfg)}, {"tool_version", kVersion}};
    if (compare) {
      OdeOptions tight;
      tight.abs_tol = 1e-14;
      tight.rel_tol = 1e-13;
      const MomentSummary cf = moment_summary(cfg.params, cfg.market, T, MomentBackend::closed_form);
      const MomentSummary od = moment_summary(cfg.params, cfg.market, T, MomentBackend::ode, tight);
      const MomentSummary vb = moment_summary(cfg.params, cfg.market, T, MomentBackend::paper_verbatim);
      const McMoments mc = estimate_integrated_moments(cfg.params, cfg.market, mom_mc.sim());
      run.seeds.push_back(mom_mc.seed);
      auto stats = [](const MomentSummary& m) {
        return std::array<double, 7>{m.x0[0], m.x0[1], m.x0[2], m.var[0], m.var[1], m.var[2], m.cov12};
      };
      const std::array<McEstimate, 7> mcs{mc.mean[0], mc.mean[1], mc.mean[2], mc.var[0], mc.var[1], mc.var[2], mc.cov12};
      const char* names[7] = {"mean_v1_plus", "mean_v2_plus", "mean_rho_plus", "var_v1_plus",
                              "var_v2_plus",  "var_rho_plus", "cov_v1v2_plus"};
      const auto a = stats(cf), o = stats(od), v = stats(vb);
      auto rel = [](double x, double y) {
        const double s = std::max(std::abs(x), std::abs(y));
        return s == 0.0 ? 0.0 : std::abs(x - y) / s;
      };
      std::string csv = "statistic,closed_form,ode,mc,mc_std_error,paper_verbatim,rel_gap_ode,gap_mc_in_se,rel_gap_verbatim\n";
      double max_ode = 0.0, max_mc = 0.0, max_vb = 0.0;
      json rows = json::array();
      for (int i = 0; i < 7; ++i) {
        const double g_ode = rel(a[i], o[i]);
        const double g_mc = mcs[i].std_error > 0.0 ? std::abs(a[i] - mcs[i].mean) / mcs[i].std_error
                                                   : (a[i] == mcs[i].mean ? 0.0 : std::abs(a[i] - mcs[i].mean));
        const double g_vb = rel(a[i], v[i]);
        max_ode = std::max(max_ode, g_ode);
        max_mc = std::max(max_mc, g_mc);
        max_vb = std::max(max_vb, g_vb);
        csv += std::string(names[i]) + "," + num(a[i]) + "," + num(o[i]) + "," + num(mcs[i].mean) + "," +
               num(mcs[i].std_error) + "," + num(v[i]) + "," + num(g_ode) + "," + num(g_mc) + "," + num(g_vb) + "\n";
        rows.push_back({{"statistic", names[i]}, {"closed_form", a[i]}, {"ode", o[i]},
                        {"mc", estimate_json(mcs[i])}, {"paper_verbatim", v[i]}});
      }
      const fs::path p = fs::path(common.out_dir) / "moments_compare.csv";
      write_text(p, csv);
      run.outputs.push_back(p.string());
      r["comparison"] = {{"rows", rows},
                         {"max_rel_gap_ode", max_ode},
                         {"max_gap_mc_in_se", max_mc},
                         {"max_rel_gap_paper_verbatim", max_vb},
                         {"mc", mc_json(mom_mc)},
                         {"clamp_fraction", mc.clamp_fraction}};
    }
    emit(run, common, out, r, "moments.json");
  } else if (analyze->parsed()) {
    run.command = "analyze";
    const PricePairSeries s = load_csv(csv_path);
    if (window < 3) throw UsageError("--window must be at least 3");
    if (window > s.size()) {
      throw UsageError("--window " + std::to_string(window) + " exceeds the series length " + std::to_string(s.size()));
    }
    const StatsSummary st = summary(s);
    auto row = [](const MomentRow& m) {
      return json{{"mean", m.mean}, {"std", m.std}, {"skewness", m.skewness}, {"kurtosis", m.kurtosis}};
    };
    json r = {{"schema_version", kSchemaVersion}, {"kind", "market_summary"}, {"input", csv_path},
              {"n_prices", st.n_prices}, {"asset1", row(st.asset1)}, {"asset2", row(st.asset2)},
              {"price_correlation", st.price_correlation}, {"return_correlation", st.return_correlation},
              {"window", window}, {"conventions", "biased central moments; Pearson (non-excess) kurtosis"}};
    for (auto [name, on] : {std::pair{"rolling_prices.csv", RollingOn::prices}, {"rolling_returns.csv", RollingOn::returns}}) {
      if (on == RollingOn::returns && window > s.size() - 1) continue;
      std::string csv = "date,corr\n";
      for (const auto& pt : rolling_correlation(s, window, on))
        csv += pt.date + "," + (pt.correlation ? num(*pt.correlation) : std::string()) + "\n";
      const fs::path p = fs::path(common.out_dir) / name;
      write_text(p, csv);
      run.outputs.push_back(p.string());
    }
    emit(run, common, out, r, "summary.json");
  }

  write_manifest(run, common);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err, std::nullopt);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ConfigError& e) {
    err << "config error at " << e.field() << ": " << e.what() << "\n";
    return kUsage;
  } catch (const ModelError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace xopt::cli
