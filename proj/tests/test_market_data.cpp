#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "xopt/errors.hpp"
#include "xopt/market_data.hpp"

using namespace xopt;

namespace {

PricePairSeries series(const std::vector<double>& a, const std::vector<double>& b) {
  PricePairSeries s;
  for (std::size_t i = 0; i < a.size(); ++i) {
    char d[40];
    std::snprintf(d, sizeof d, "2020-%02zu-%02zu", 1 + i / 28, 1 + i % 28);
    s.dates.emplace_back(d);
  }
  s.p1 = a;
  s.p2 = b;
  return s;
}

std::string error_of(const std::string& text) {
  try {
    (void)parse_csv(text);
  } catch (const ModelError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("parse a small file") {
  const auto s = parse_csv("date,price1,price2\n2020-01-01,100,50\n2020-01-02,110,55\n2020-01-03,99,52\n");
  REQUIRE(s.size() == 3);
  CHECK(s.dates[2] == "2020-01-03");
  CHECK(s.p1[1] == 110.0);
  CHECK(s.p2[2] == 52.0);
  const auto r = log_returns(s);
  REQUIRE(r.r1.size() == 2);
  CHECK(r.r1[0] == doctest::Approx(0.0953102).epsilon(1e-6));
  CHECK(r.dates[0] == "2020-01-02");

  // CRLF and a byte order mark
  const auto w = parse_csv("\xEF\xBB\xBF" "date,price1,price2\r\n2020-01-01,1,2\r\n2020-01-02,3,4\r\n");
  CHECK(w.size() == 2);
}

TEST_CASE("bad rows are reported with line numbers") {
  const std::string e = error_of("date,price1,price2\n2020-01-01,100,50\n2020-01-02,110,55\n2020-01-03,-1,52\n");
  CHECK(e.find("line 4") != std::string::npos);

  CHECK(error_of("date,price1,price2\n2020-01-01,1,2\n2020-01-01,1,2\n").find("increasing") != std::string::npos);
  CHECK(error_of("date,price1,price2\n2020-01-02,1,2\n2020-01-01,1,2\n").find("increasing") != std::string::npos);
  CHECK(error_of("date,p1,p2\n2020-01-01,1,2\n2020-01-02,1,2\n").find("header") != std::string::npos);
  CHECK(error_of("date,price1,price2\n2020-02-30,1,2\n2020-03-01,1,2\n").find("line 2") != std::string::npos);
  CHECK(error_of("date,price1,price2\n2020-01-01,1\n2020-01-02,1,2\n").find("line 2") != std::string::npos);
  CHECK(error_of("date,price1,price2\n2020-01-01,abc,2\n2020-01-02,1,2\n").find("line 2") != std::string::npos);
  CHECK_FALSE(error_of("date,price1,price2\n2020-01-01,1,2\n").empty());
  CHECK_THROWS_AS((void)load_csv("/nonexistent/prices.csv"), ModelError);
}

TEST_CASE("moment rows") {
  SUBCASE("symmetric sample") {
    const auto m = moment_row({-2.0, -1.0, 0.0, 1.0, 2.0});
    CHECK(m.mean == 0.0);
    CHECK(m.std == doctest::Approx(std::sqrt(2.0)));
    CHECK(m.skewness == doctest::Approx(0.0));
    CHECK(m.kurtosis == doctest::Approx(6.8 / 4.0));
  }
  SUBCASE("normal sample") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> n(0.001, 0.02);
    std::vector<double> x(200000);
    for (auto& v : x) v = n(rng);
    const auto m = moment_row(x);
    CHECK(m.mean == doctest::Approx(0.001).epsilon(0.2));
    CHECK(m.std == doctest::Approx(0.02).epsilon(0.01));
    CHECK(std::abs(m.skewness) < 0.03);
    CHECK(m.kurtosis == doctest::Approx(3.0).epsilon(0.02));
  }
}

TEST_CASE("correlation") {
  const std::vector<double> x{1, 2, 3, 4, 5, 6};
  std::vector<double> y;
  for (double v : x) y.push_back(2 * v + 1);
  CHECK(*pearson(x.data(), y.data(), x.size()) == doctest::Approx(1.0));
  std::vector<double> z;
  for (double v : x) z.push_back(-3 * v);
  CHECK(*pearson(x.data(), z.data(), x.size()) == doctest::Approx(-1.0));
  const std::vector<double> c(6, 4.0);
  CHECK_FALSE(pearson(x.data(), c.data(), x.size()).has_value());
}

TEST_CASE("summary and rolling windows") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 0.01);
  std::vector<double> a{100.0}, b{80.0};
  for (int i = 1; i < 120; ++i) {
    const double e = n(rng);
    a.push_back(a.back() * std::exp(e + n(rng)));
    b.push_back(b.back() * std::exp(0.5 * e + n(rng)));
  }
  const auto s = series(a, b);
  const auto sum = summary(s);
  CHECK(sum.n_prices == 120);
  CHECK(sum.return_correlation > 0.2);

  SUBCASE("full window equals the overall correlation") {
    const auto r = rolling_correlation(s, s.size());
    REQUIRE(r.size() == 1);
    CHECK(*r[0].correlation == doctest::Approx(sum.price_correlation).epsilon(1e-12));
    const auto rr = rolling_correlation(s, s.size() - 1, RollingOn::returns);
    REQUIRE(rr.size() == 1);
    CHECK(*rr[0].correlation == doctest::Approx(sum.return_correlation).epsilon(1e-12));
  }
  SUBCASE("brute force") {
    const std::size_t w = 20;
    const auto r = rolling_correlation(s, w);
    REQUIRE(r.size() == s.size() - w + 1);
    for (std::size_t k = 0; k < r.size(); k += 7) {
      double ma = 0, mb = 0;
      for (std::size_t i = k; i < k + w; ++i) ma += a[i], mb += b[i];
      ma /= w;
      mb /= w;
      double sab = 0, saa = 0, sbb = 0;
      for (std::size_t i = k; i < k + w; ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
      }
      CHECK(*r[k].correlation == doctest::Approx(sab / std::sqrt(saa * sbb)).epsilon(1e-10));
      CHECK(r[k].date == s.dates[k + w - 1]);
    }
  }
  SUBCASE("affine invariance") {
    auto t = s;
    for (auto& v : t.p1) v = 3.0 * v + 7.0;
    const auto r1 = rolling_correlation(s, 15);
    const auto r2 = rolling_correlation(t, 15);
    for (std::size_t k = 0; k < r1.size(); ++k) CHECK(*r1[k].correlation == doctest::Approx(*r2[k].correlation).epsilon(1e-9));
  }
  SUBCASE("swapping the assets") {
    auto t = s;
    std::swap(t.p1, t.p2);
    const auto u = summary(t);
    CHECK(u.return_correlation == doctest::Approx(sum.return_correlation).epsilon(1e-14));
    CHECK(u.asset1.std == sum.asset2.std);
  }
  CHECK_THROWS_AS((void)rolling_correlation(s, 2), ModelError);
  CHECK_THROWS_AS((void)rolling_correlation(s, 121), ModelError);
}

TEST_CASE("flat stretch gives missing correlations") {
  std::vector<double> a(10, 100.0), b{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  a[9] = 101.0;
  const auto r = rolling_correlation(series(a, b), 5);
  REQUIRE(r.size() == 6);
  CHECK_FALSE(r[0].correlation.has_value());
  CHECK(r[5].correlation.has_value());
}

TEST_CASE("too short for a summary") {
  CHECK_THROWS_AS((void)summary(series({1, 2, 3, 4}, {1, 2, 3, 5})), ModelError);
  CHECK_NOTHROW((void)summary(series({1, 2, 3, 4, 5}, {1, 2, 3, 5, 4})));
}
