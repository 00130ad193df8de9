#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace xopt {

struct PricePairSeries {
  std::vector<std::string> dates;  // ISO yyyy-mm-dd, strictly increasing
  std::vector<double> p1;
  std::vector<double> p2;

  [[nodiscard]] std::size_t size() const noexcept { return dates.size(); }
};

struct ReturnSeries {
  std::vector<std::string> dates;  // date of the later observation
  std::vector<double> r1;
  std::vector<double> r2;
};

struct MomentRow {
  double mean = 0.0;
  double std = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;  // Pearson m4 / m2^2, not excess
};

/// Biased (1/n) central moments throughout.
struct StatsSummary {
  MomentRow asset1;
  MomentRow asset2;
  double price_correlation = 0.0;
  double return_correlation = 0.0;
  std::size_t n_prices = 0;
};

struct RollingPoint {
  std::string date;                  // last date of the window
  std::optional<double> correlation; // empty when a window has zero variance
};

enum class RollingOn { prices, returns };

/// Header must be exactly date,price1,price2. Throws ModelError listing up to
/// the first 10 offending lines.
[[nodiscard]] PricePairSeries load_csv(const std::filesystem::path& path);
[[nodiscard]] PricePairSeries parse_csv(const std::string& text);

/// Checks equal lengths >= 2, strictly increasing dates and positive prices.
void validate_series(const PricePairSeries& s);

[[nodiscard]] ReturnSeries log_returns(const PricePairSeries& s);

[[nodiscard]] MomentRow moment_row(const std::vector<double>& x);

/// Pearson correlation; empty when either input has zero variance.
[[nodiscard]] std::optional<double> pearson(const double* x, const double* y, std::size_t n);

/// Requires at least 4 returns.
[[nodiscard]] StatsSummary summary(const PricePairSeries& s);

/// Trailing-window Pearson correlation, n - window + 1 points.
[[nodiscard]] std::vector<RollingPoint> rolling_correlation(const PricePairSeries& s, std::size_t window,
                                                            RollingOn on = RollingOn::prices);

}  // namespace xopt
