#include "ringlattice/specfun.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <tuple>
#include <vector>

#include "ringlattice/error.hpp"

namespace ringlattice::specfun {

namespace {

constexpr double kSeriesLimit = 12.0;
constexpr double kPi = 3.14159265358979323846;
constexpr double kGridMaxStep = 4.0;

void check_args(int order, double x) {
  if (!std::isfinite(x)) fail(ErrorKind::domain, "bessel_j: non-finite argument");
  if (std::abs(order) > kMaxOrder)
    fail(ErrorKind::domain, "bessel_j: order " + std::to_string(order) + " exceeds limit");
}

// Ascending series, order >= 0, 0 <= x <= kSeriesLimit. Long double keeps the
// cancellation at x = 12 (largest term ~4e3) well below 1e-12.
long double series(int order, long double x) {
  const long double h = x / 2;
  long double term = 1;
  if (order <= 150) {
    for (int k = 1; k <= order; ++k) term *= h / k;
  } else {
    term = std::exp(order * std::log(h) - std::lgamma(static_cast<long double>(order) + 1));
  }
  if (term == 0) return 0;
  long double sum = term;
  const long double h2 = h * h;
  for (int k = 1; k < 500; ++k) {
    term *= -h2 / (static_cast<long double>(k) * (k + order));
    sum += term;
    if (k > h && std::abs(term) < 1e-22L * std::abs(sum)) break;
  }
  return sum;
}

// Miller backward recurrence from an order well above max(order, x),
// normalized with J_0 + 2 sum_k J_2k = 1. Returns J_order and J_order+1.
std::pair<double, double> miller(int order, double x) {
  const int top = std::max(order + 1, static_cast<int>(std::ceil(x)));
  int start = top + 40 + static_cast<int>(8.0 * std::cbrt(x));
  if (start % 2 != 0) ++start;

  double next = 0.0;  // f_{k+1}
  double cur = 1.0;   // f_k
  double norm = 2.0 * cur;
  double at_order = 0.0;
  double at_next = 0.0;
  for (int k = start; k >= 1; --k) {
    const double prev = (2.0 * k / x) * cur - next;
    next = cur;
    cur = prev;
    const int idx = k - 1;
    if (idx == order) at_order = cur;
    if (idx == order + 1) at_next = cur;
    if (idx == 0) {
      norm += cur;
    } else if (idx % 2 == 0) {
      norm += 2.0 * cur;
    }
    if (std::abs(cur) > 1e200) {
      cur *= 1e-200;
      next *= 1e-200;
      norm *= 1e-200;
      at_order *= 1e-200;
      at_next *= 1e-200;
    }
  }
  return {at_order / norm, at_next / norm};
}

// order >= 0, x >= 0
std::pair<double, double> pair_nonneg(int order, double x) {
  if (x == 0.0) return {order == 0 ? 1.0 : 0.0, 0.0};
  if (x <= kSeriesLimit) {
    return {static_cast<double>(series(order, x)), static_cast<double>(series(order + 1, x))};
  }
  return miller(order, x);
}

double parity(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

double bessel_j(int order, double x) {
  check_args(order, x);
  const int n = std::abs(order);
  double sign = 1.0;
  if (order < 0) sign *= parity(n);
  if (x < 0) {
    sign *= parity(n);
    x = -x;
  }
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  if (x <= kSeriesLimit) return sign * static_cast<double>(series(n, x));
  return sign * miller(n, x).first;
}

std::pair<double, double> bessel_j_pair(int order, double x) {
  check_args(order, x);
  if (order < 0) fail(ErrorKind::domain, "bessel_j_pair: negative order");
  if (x < 0) {
    auto [a, b] = pair_nonneg(order, -x);
    return {parity(order) * a, parity(order + 1) * b};
  }
  return pair_nonneg(order, x);
}

BesselZeroTable::BesselZeroTable(int order, int count) : order_(order) {
  if (order < 0) fail(ErrorKind::domain, "BesselZeroTable: negative order");
  extend(count);
}

namespace {

// Safeguarded Newton on [a, b], where J_m changes sign. fa is J_m(a).
double polish_zero(int m, double a, double b, double fa, double x) {
  if (!(x > a && x < b)) x = 0.5 * (a + b);
  for (int it = 0; it < 60 && b - a > 0.0; ++it) {
    const auto [j, j1] = pair_nonneg(m, x);
    if (j == 0.0) break;
    if (std::signbit(j) == std::signbit(fa)) {
      a = x;
    } else {
      b = x;
    }
    const double slope = (m / x) * j - j1;
    double step = j / slope;
    double xn = x - step;
    if (!(xn > a && xn < b)) {
      xn = 0.5 * (a + b);
      step = x - xn;
    }
    x = xn;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * x) break;
  }
  return x;
}

}  // namespace

void BesselZeroTable::extend(int count) {
  const int m = order_;
  const auto value = [m](double x) { return pair_nonneg(m, x).first; };

  while (size() < count) {
    const int k = size();
    if (k >= 2) {
      // Zero spacings are monotone in n and tend to pi, so the next zero lies
      // between z + d and z + pi, d being the previous spacing.
      const double z = zeros_[k - 1];
      const double d = z - zeros_[k - 2];
      const double slack = 1e-9 * z;
      const double a = z + std::min(d, kPi) - slack;
      const double b = z + std::max(d, kPi) + slack;
      const double fa = value(a);
      const double fb = value(b);
      if (fa != 0.0 && fb != 0.0 && std::signbit(fa) != std::signbit(fb)) {
        zeros_.push_back(polish_zero(m, a, b, fa, z + d + (d - (k >= 3 ? zeros_[k - 2] - zeros_[k - 3] : d))));
        continue;
      }
    }

    double a;
    if (zeros_.empty()) {
      // j_{m,1} > m + 1.8557 m^{1/3}; J_m stays positive below its first zero.
      a = (m == 0) ? 0.0 : std::max(0.0, m + 1.8557 * std::cbrt(static_cast<double>(m)) - 1.0);
    } else {
      // consecutive zeros are at least 3.11 apart for every m >= 0
      a = zeros_.back() + 3.0;
    }
    double fa = value(a);
    double b = a;
    double fb = fa;
    for (;;) {
      b = a + 0.25;
      fb = value(b);
      if (fb == 0.0 || std::signbit(fa) != std::signbit(fb)) break;
      a = b;
      fa = fb;
    }
    if (fb == 0.0) {
      zeros_.push_back(b);
      continue;
    }

    for (int i = 0; i < 8; ++i) {
      const double mid = 0.5 * (a + b);
      const double fm = value(mid);
      if (fm == 0.0) {
        a = b = mid;
        break;
      }
      if (std::signbit(fm) == std::signbit(fa)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
      }
    }
    zeros_.push_back(polish_zero(m, a, b, fa, 0.5 * (a + b)));
  }
}

void bessel_j_grid(int order, double x0, double dx, std::span<double> out) {
  if (out.empty()) return;
  check_args(order, x0);
  if (order < 0) {
    bessel_j_grid(-order, x0, dx, out);
    if ((-order) % 2 != 0) {
      for (auto& v : out) v = -v;
    }
    return;
  }
  if (!(x0 > 0.0) || !(dx > 0.0) || dx > kGridMaxStep || !std::isfinite(x0 + dx * out.size())) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = bessel_j(order, x0 + dx * static_cast<double>(i));
    return;
  }

  // Graf: J_v(x + d) = sum_k J_k(d) J_{v-k}(x), truncated where J_k(d) < 1e-18.
  std::vector<double> jd{static_cast<double>(series(0, dx))};
  for (int k = 1; k < 60; ++k) {
    jd.push_back(static_cast<double>(series(k, dx)));
    if (k > dx && std::abs(jd.back()) < 1e-18) break;
  }
  const int kk = static_cast<int>(jd.size()) - 1;
  const int v = order;

  // Orders v - kk .. v + 1 + kk, stored at offset idx = order - (v - kk).
  std::vector<double> w(static_cast<std::size_t>(2 * kk + 2));
  auto [jv, jv1] = pair_nonneg(v, x0);
  out[0] = jv;
  for (std::size_t i = 1; i < out.size(); ++i) {
    const double x = x0 + dx * static_cast<double>(i - 1);
    const double inv = 2.0 / x;
    // Rounding in the generated orders grows by up to 2|order|/x per step
    // where |order| > x; fall back to a direct evaluation if that growth,
    // weighted by J_k(dx), could exceed 1e3.
    // Likewise J_{v-k}(x) outgrows J_v(x) when v - k > x, which slows the
    // convergence of the truncated sum.
    double growth = 1.0;
    double amplification = 1.0;
    double lower = 1.0;
    for (int k = 1; k <= kk; ++k) {
      growth *= std::max(1.0, (std::max(v, kk) + k) * inv);
      amplification = std::max(amplification, std::abs(jd[k]) * growth);
      lower *= std::max(1.0, (v - k + 1) * inv);
    }
    if (amplification > 1e3 || std::abs(jd[kk]) * lower > 1e-15) {
      std::tie(jv, jv1) = pair_nonneg(v, x + dx);
      out[i] = jv;
      continue;
    }
    w[kk] = jv;
    w[kk + 1] = jv1;
    for (int j = kk; j >= 1; --j) {
      const int ord = v - kk + j;  // order held at w[j]
      w[j - 1] = ord * inv * w[j] - w[j + 1];
    }
    for (int j = kk + 1; j < 2 * kk + 1; ++j) {
      const int ord = v - kk + j;
      w[j + 1] = ord * inv * w[j] - w[j - 1];
    }
    double a0 = jd[0] * w[kk];
    double a1 = jd[0] * w[kk + 1];
    for (int k = 1; k <= kk; ++k) {
      const double s = (k % 2 == 0) ? 1.0 : -1.0;
      a0 += jd[k] * (w[kk - k] + s * w[kk + k]);
      a1 += jd[k] * (w[kk + 1 - k] + s * w[kk + 1 + k]);
    }
    jv = a0;
    jv1 = a1;
    out[i] = jv;
  }
}

double bessel_zero(int order, int index) {
  if (index < 1) fail(ErrorKind::domain, "bessel_zero: index must be >= 1");
  if (order < 0 || order > kMaxOrder) fail(ErrorKind::domain, "bessel_zero: bad order");
  return BesselZeroTable(order, index)(index);
}

double log_binomial(int a, int b) {
  if (a < 0 || b < 0 || b > a) return -std::numeric_limits<double>::infinity();
  using ld = long double;
  const ld r = std::lgamma(static_cast<ld>(a) + 1) - std::lgamma(static_cast<ld>(b) + 1) -
               std::lgamma(static_cast<ld>(a - b) + 1);
  return static_cast<double>(r);
}

}  // namespace ringlattice::specfun
