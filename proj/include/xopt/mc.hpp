#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "xopt/margrabe.hpp"
#include "xopt/model.hpp"

namespace xopt {

/// log_euler_exact_ou: exact OU transition for sigma, rho drawn from a scaled
///   Beta matching its exact one-step conditional mean and variance,
///   log-prices exact given the per-step frozen (sigma, rho).
/// full_euler: plain Euler for sigma and rho, same log-price step.
enum class Scheme { log_euler_exact_ou, full_euler };

/// payoff:      discounted (c S1_T - m S2_T)_+
/// conditional: C_M(V1+, V2+, rho+) averaged over the vol/corr paths
/// forward:     discounted (c S1_T - m S2_T), a martingale check
enum class Estimator { payoff, conditional, forward };

[[nodiscard]] std::string_view to_string(Scheme s) noexcept;
[[nodiscard]] std::string_view to_string(Estimator e) noexcept;
[[nodiscard]] Scheme parse_scheme(std::string_view s);
[[nodiscard]] Estimator parse_estimator(std::string_view s);

struct SimConfig {
  std::size_t n_paths = 100'000;
  std::size_t n_steps = 2000;  // per unit of time
  std::uint64_t seed = 20190131;
  Scheme scheme = Scheme::log_euler_exact_ou;
  bool antithetic = false;
  unsigned threads = 0;        // 0: hardware concurrency; XOPT_THREADS caps either way
  bool record_paths = false;   // keep full trajectories (small runs only)
};

/// Simulation output. Terminal per-path quantities are always filled;
/// trajectories only when record_paths is set, laid out [path * times.size() + i].
struct PathBatch {
  std::vector<double> times;
  std::size_t n_paths = 0;

  std::vector<Pair> s;
  std::vector<Pair> sigma;
  std::vector<double> rho;
  std::vector<Pair> v_plus;
  std::vector<double> rho_plus;

  std::vector<Pair> log_growth;  // log(S_T / S_0) per path
  std::vector<Vec3> x_plus;      // (V1+, V2+, rho+) at T, trapezoid rule

  std::uint64_t seed = 0;
  std::string rng;  // generator and stream derivation
  bool antithetic = false;  // paths 2k, 2k+1 share a stream with negated normals
  std::size_t rho_steps = 0;
  std::size_t clamped_steps = 0;

  [[nodiscard]] double clamp_fraction() const noexcept {
    return rho_steps == 0 ? 0.0 : static_cast<double>(clamped_steps) / static_cast<double>(rho_steps);
  }
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

/// Sample mean with std_error = sample std / sqrt(n). With paired set, the
/// error is computed from the means of consecutive (antithetic) pairs.
[[nodiscard]] McEstimate estimate_mean(const std::vector<double>& xs, bool paired = false);

[[nodiscard]] std::size_t steps_for(double maturity, std::size_t steps_per_year);

/// Rejects n_paths * steps beyond the resource budget and recording runs
/// that would not fit in memory.
[[nodiscard]] PathBatch simulate(const ModelParams& params, const MarketState& state, const SimConfig& cfg);

struct McPrice {
  McEstimate estimate;
  Estimator estimator = Estimator::payoff;
  std::size_t steps = 0;
  double clamp_fraction = 0.0;
};

[[nodiscard]] McPrice price_mc(const ModelParams& params, const MarketState& state, const SimConfig& cfg,
                               Estimator estimator = Estimator::payoff);

/// Per-path values of an estimator for a given spot, reusing a simulated batch.
[[nodiscard]] std::vector<double> path_values(const PathBatch& batch, const MarketState& state, Estimator estimator);

/// Bump-and-revalue delta on common random numbers, bump rel_bump * S0[leg].
[[nodiscard]] McEstimate delta_mc(const ModelParams& params, const MarketState& state, const SimConfig& cfg,
                                  std::size_t leg, double rel_bump = 1e-3, Estimator estimator = Estimator::payoff);

/// Empirical version of the five moment statistics, with standard errors.
struct McMoments {
  McEstimate mean[3];  // V1+, V2+, rho+
  McEstimate var[3];
  McEstimate cov12;
  std::size_t steps = 0;
  double clamp_fraction = 0.0;
};

[[nodiscard]] McMoments estimate_integrated_moments(const ModelParams& params, const MarketState& state,
                                                    const SimConfig& cfg);
[[nodiscard]] McMoments integrated_moments(const PathBatch& batch);

/// Worker count after applying XOPT_THREADS.
[[nodiscard]] unsigned resolve_threads(unsigned requested);

}  // namespace xopt
