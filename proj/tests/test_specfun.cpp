#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "ringlattice/error.hpp"
#include "ringlattice/specfun.hpp"

using namespace ringlattice::specfun;

TEST_CASE("bessel_j trivial values") {
  CHECK(bessel_j(0, 0.0) == 1.0);
  CHECK(bessel_j(3, 0.0) == 0.0);
  CHECK(bessel_j(-3, 0.0) == 0.0);
}

TEST_CASE("bessel_j vanishes at the series-bisected first zero of J0") {
  const double z = oracle::bisect([](long double x) { return oracle::series_j(0, x); }, 2.0L, 3.0L);
  CHECK(z == doctest::Approx(2.404825557695773).epsilon(1e-15));
  CHECK(std::abs(bessel_j(0, 2.404825557695773)) < 1e-12);
  CHECK(std::abs(bessel_j(0, z)) < 1e-12);
}

TEST_CASE("bessel_j matches an independent implementation for |x| <= 100") {
  double worst = 0.0;
  for (int n = -40; n <= 40; ++n) {
    for (int i = 0; i <= 400; ++i) {
      const double x = -100.0 + 0.5 * i;
      const double ref = boost::math::cyl_bessel_j(static_cast<double>(n), x);
      worst = std::max(worst, std::abs(bessel_j(n, x) - ref));
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("bessel_j frozen high-argument values") {
  // mpmath, 30 digits
  CHECK(bessel_j(10, 328.930191594875749289975035297586) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(bessel_j(10, 328.930191594875749289975035297586)) < 1e-12);
  CHECK(std::abs(bessel_j(300, 700.0) - boost::math::cyl_bessel_j(300.0, 700.0)) < 1e-13);
}

TEST_CASE("bessel_j negative order and argument symmetry") {
  for (int n = 0; n < 8; ++n) {
    const double s = (n % 2 == 0) ? 1.0 : -1.0;
    CHECK(bessel_j(-n, 3.7) == doctest::Approx(s * bessel_j(n, 3.7)));
    CHECK(bessel_j(n, -15.2) == doctest::Approx(s * bessel_j(n, 15.2)));
  }
}

TEST_CASE("bessel_j domain errors") {
  CHECK_THROWS_AS(bessel_j(0, std::numeric_limits<double>::quiet_NaN()), ringlattice::Error);
  CHECK_THROWS_AS(bessel_j(0, std::numeric_limits<double>::infinity()), ringlattice::Error);
  CHECK_THROWS_AS(bessel_j(kMaxOrder + 1, 1.0), ringlattice::Error);
}

TEST_CASE("three-term recurrence on [0, 50]") {
  double worst = 0.0;
  for (int i = 1; i <= 1000; ++i) {
    const double x = 50.0 * i / 1000.0;
    for (int n = 1; n <= 30; ++n) {
      const double lhs = bessel_j(n - 1, x) + bessel_j(n + 1, x);
      const double rhs = (2.0 * n / x) * bessel_j(n, x);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("sum of squares over all orders is one") {
  for (double x : {0.1, 1.0, 3.0, 7.5, 12.0, 12.5, 25.0, 60.0, 100.0}) {
    const int k = static_cast<int>(std::ceil(2 * x)) + 30;
    double s = 0.0;
    for (int n = -k; n <= k; ++n) s += bessel_j(n, x) * bessel_j(n, x);
    CHECK(std::abs(s - 1.0) < 1e-12);
  }
}

TEST_CASE("bessel_j_pair agrees with bessel_j") {
  for (int n : {0, 1, 5, 40}) {
    for (double x : {0.3, 11.9, 12.1, 80.0}) {
      auto [a, b] = bessel_j_pair(n, x);
      CHECK(a == bessel_j(n, x));
      CHECK(b == bessel_j(n + 1, x));
    }
  }
}

TEST_CASE("bessel_zero frozen values and interlacing") {
  CHECK(bessel_zero(0, 1) == doctest::Approx(2.404825557695773).epsilon(1e-14));
  CHECK(bessel_zero(1, 1) == doctest::Approx(3.831705970207512).epsilon(1e-14));
  CHECK(bessel_zero(0, 2) == doctest::Approx(5.520078110286311).epsilon(1e-14));
  CHECK(bessel_zero(10, 1) == doctest::Approx(14.475500686554541).epsilon(1e-14));
  CHECK(bessel_zero(10, 100) == doctest::Approx(328.93019159487575).epsilon(1e-14));
  CHECK(bessel_zero(0, 1) < bessel_zero(1, 1));
  CHECK(bessel_zero(1, 1) < bessel_zero(0, 2));
  CHECK_THROWS_AS(bessel_zero(0, 0), ringlattice::Error);
}

TEST_CASE("zero table invariants") {
  for (int m : {0, 1, 2, 10, 57, 300}) {
    BesselZeroTable t(m, 120);
    BesselZeroTable up(m + 1, 120);
    REQUIRE(t.size() == 120);
    for (int n = 1; n <= 120; ++n) {
      CHECK(std::abs(bessel_j(m, t(n))) < 1e-12);
      if (n > 1) CHECK(t(n) > t(n - 1));
      if (n < 120) {
        CHECK(up(n) > t(n));
        CHECK(up(n) < t(n + 1));
      }
    }
  }
}

TEST_CASE("zeros agree with a brute-force sign scan") {
  for (int m : {0, 3, 10}) {
    BesselZeroTable t(m, 12);
    int found = 0;
    double prev = bessel_j(m, 1e-3);
    for (double x = 2e-3; found < 12; x += 1e-3) {
      const double cur = bessel_j(m, x);
      if ((cur < 0) != (prev < 0)) {
        const double z = oracle::bisect(
            [m](long double y) { return static_cast<long double>(bessel_j(m, static_cast<double>(y))); },
            x - 1e-3, x);
        ++found;
        CHECK(t(found) == doctest::Approx(z).epsilon(1e-13));
      }
      prev = cur;
    }
  }
}

TEST_CASE("zero table extension is idempotent") {
  BesselZeroTable a(4, 10);
  a.extend(30);
  a.extend(5);
  BesselZeroTable b(4, 30);
  REQUIRE(a.size() == 30);
  for (int n = 1; n <= 30; ++n) CHECK(a(n) == b(n));
}

TEST_CASE("log_binomial") {
  CHECK(log_binomial(4, 2) == doctest::Approx(std::log(6.0)).epsilon(1e-15));
  CHECK(log_binomial(40, 20) == doctest::Approx(std::log(137846528820.0)).epsilon(1e-15));
  CHECK(log_binomial(10, -1) == -std::numeric_limits<double>::infinity());
  CHECK(log_binomial(10, 11) == -std::numeric_limits<double>::infinity());
  CHECK(log_binomial(0, 0) == 0.0);
  for (unsigned a = 0; a <= 60; ++a) {
    for (unsigned b = 0; b <= a; ++b) {
      const double exact = static_cast<double>(oracle::binomial(a, b));
      CHECK(std::exp(log_binomial(a, b)) == doctest::Approx(exact).epsilon(1e-13));
    }
  }
  // small results at large a keep full relative accuracy
  CHECK(log_binomial(2000, 1) == doctest::Approx(std::log(2000.0)).epsilon(1e-13));
  CHECK(log_binomial(2000, 1999) == doctest::Approx(std::log(2000.0)).epsilon(1e-13));
}
