#include "xopt/market_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "xopt/errors.hpp"

namespace xopt {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

bool valid_iso_date(const std::string& d) {
  if (d.size() != 10 || d[4] != '-' || d[7] != '-') return false;
  for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9})
    if (d[i] < '0' || d[i] > '9') return false;
  const int y = std::stoi(d.substr(0, 4));
  const int m = std::stoi(d.substr(5, 2));
  const int day = std::stoi(d.substr(8, 2));
  static constexpr int days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m < 1 || m > 12 || day < 1) return false;
  const int limit = days[m - 1] + ((m == 2 && is_leap(y)) ? 1 : 0);
  return day <= limit;
}

[[noreturn]] void fail(const std::vector<std::string>& problems, std::size_t total) {
  std::string msg = "malformed price file (" + std::to_string(total) + " bad line" + (total == 1 ? "" : "s") + ")";
  for (const auto& p : problems) msg += "\n  " + p;
  if (total > problems.size()) msg += "\n  ...";
  throw ModelError(msg);
}

}  // namespace

PricePairSeries parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ModelError("empty price file");
  std::string header = trim(line);
  if (header.size() >= 3 && static_cast<unsigned char>(header[0]) == 0xEF) header = header.substr(3);  // BOM
  if (header != "date,price1,price2") throw ModelError("line 1: expected header 'date,price1,price2'");

  PricePairSeries s;
  std::vector<std::string> problems;
  std::size_t bad = 0;
  auto report = [&](std::size_t lineno, const std::string& what) {
    ++bad;
    if (problems.size() < 10) problems.push_back("line " + std::to_string(lineno) + ": " + what);
  };

  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ls(t);
    std::string cell;
    while (std::getline(ls, cell, ',')) cols.push_back(trim(cell));
    if (cols.size() != 3) {
      report(lineno, "expected 3 columns, got " + std::to_string(cols.size()));
      continue;
    }
    if (!valid_iso_date(cols[0])) {
      report(lineno, "invalid date '" + cols[0] + "'");
      continue;
    }
    double a = 0.0, b = 0.0;
    if (!parse_double(cols[1], a) || !parse_double(cols[2], b)) {
      report(lineno, "non-numeric price");
      continue;
    }
    if (!(a > 0.0) || !(b > 0.0)) {
      report(lineno, "nonpositive price");
      continue;
    }
    if (!s.dates.empty() && !(s.dates.back() < cols[0])) {
      report(lineno, "dates not strictly increasing (" + cols[0] + " after " + s.dates.back() + ")");
      continue;
    }
    s.dates.push_back(cols[0]);
    s.p1.push_back(a);
    s.p2.push_back(b);
  }
  if (bad > 0) fail(problems, bad);
  validate_series(s);
  return s;
}

PricePairSeries load_csv(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ModelError("cannot open price file " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_csv(ss.str());
}

void validate_series(const PricePairSeries& s) {
  if (s.p1.size() != s.dates.size() || s.p2.size() != s.dates.size())
    throw ModelError("price series have unequal lengths");
  if (s.size() < 2) throw ModelError("price series needs at least 2 observations");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(s.p1[i] > 0.0) || !(s.p2[i] > 0.0)) throw ModelError("nonpositive price at " + s.dates[i]);
    if (i > 0 && !(s.dates[i - 1] < s.dates[i])) throw ModelError("dates not strictly increasing at " + s.dates[i]);
  }
}

ReturnSeries log_returns(const PricePairSeries& s) {
  validate_series(s);
  ReturnSeries r;
  for (std::size_t i = 1; i < s.size(); ++i) {
    r.dates.push_back(s.dates[i]);
    r.r1.push_back(std::log(s.p1[i] / s.p1[i - 1]));
    r.r2.push_back(std::log(s.p2[i] / s.p2[i - 1]));
  }
  return r;
}

MomentRow moment_row(const std::vector<double>& x) {
  if (x.empty()) throw ModelError("moments of an empty sample");
  const double n = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  MomentRow r;
  r.mean = mean;
  r.std = std::sqrt(m2);
  r.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
  r.kurtosis = m2 > 0.0 ? m4 / (m2 * m2) : 0.0;
  return r;
}

std::optional<double> pearson(const double* x, const double* y, std::size_t n) {
  if (n < 2) return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

StatsSummary summary(const PricePairSeries& s) {
  const ReturnSeries r = log_returns(s);
  if (r.r1.size() < 4) throw ModelError("summary needs at least 4 returns");
  StatsSummary out;
  out.asset1 = moment_row(r.r1);
  out.asset2 = moment_row(r.r2);
  out.price_correlation = pearson(s.p1.data(), s.p2.data(), s.size()).value_or(std::nan(""));
  out.return_correlation = pearson(r.r1.data(), r.r2.data(), r.r1.size()).value_or(std::nan(""));
  out.n_prices = s.size();
  return out;
}

std::vector<RollingPoint> rolling_correlation(const PricePairSeries& s, std::size_t window, RollingOn on) {
  if (window < 3) throw ModelError("window must be at least 3");
  const std::vector<std::string>* dates = &s.dates;
  const double* x = s.p1.data();
  const double* y = s.p2.data();
  std::size_t n = s.size();
  ReturnSeries r;
  if (on == RollingOn::returns) {
    r = log_returns(s);
    dates = &r.dates;
    x = r.r1.data();
    y = r.r2.data();
    n = r.r1.size();
  }
  if (n < window) throw ModelError("series length " + std::to_string(n) + " is shorter than window " +
                                   std::to_string(window));
  std::vector<RollingPoint> out;
  out.reserve(n - window + 1);
  for (std::size_t end = window; end <= n; ++end) {
    const std::size_t lo = end - window;
    out.push_back({(*dates)[end - 1], pearson(x + lo, y + lo, window)});
  }
  return out;
}

}  // namespace xopt
