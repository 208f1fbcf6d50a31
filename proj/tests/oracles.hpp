#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the library.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

// Power series for J_n(x) in long double; reliable for |x| <= ~8.
inline long double series_j(int n, long double x) {
  long double term = 1;
  for (int k = 1; k <= n; ++k) term *= x / 2 / k;
  long double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= -(x * x / 4) / (static_cast<long double>(k) * (k + n));
    sum += term;
  }
  return sum;
}

inline double bisect(const std::function<long double(long double)>& f, long double a,
                     long double b) {
  long double fa = f(a);
  for (int i = 0; i < 200; ++i) {
    const long double m = (a + b) / 2;
    const long double fm = f(m);
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return static_cast<double>((a + b) / 2);
}

inline std::uint64_t binomial(unsigned a, unsigned b) {
  if (b > a) return 0;
  unsigned __int128 r = 1;
  for (unsigned k = 1; k <= b; ++k) r = r * (a - b + k) / k;
  return static_cast<std::uint64_t>(r);
}

// Composite Gauss-Legendre (5 nodes per panel) on [a, b].
template <class F>
auto gauss_panels(F f, double a, double b, int panels) {
  static const double x[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                              0.5384693101056831, 0.9061798459386640};
  static const double w[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                              0.4786286704993665, 0.2369268850561891};
  using R = decltype(f(a));
  R sum{};
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * h;
    for (int i = 0; i < 5; ++i) sum += w[i] * f(c + 0.5 * h * x[i]);
  }
  return sum * (0.5 * h);
}

// Direct DFT projection c_m = (1/sqrt(2 pi)) * (2 pi / n) * sum_j v_j e^{-i m phi_j}.
inline std::complex<double> project(const std::vector<std::complex<double>>& v, int m) {
  const int n = static_cast<int>(v.size());
  std::complex<long double> acc = 0;
  for (int j = 0; j < n; ++j) {
    const long double ang = -2.0L * 3.14159265358979323846264338327950288L *
                            static_cast<long double>((static_cast<long long>(m) * j) % n) / n;
    acc += std::complex<long double>(v[j].real(), v[j].imag()) *
           std::complex<long double>(std::cos(ang), std::sin(ang));
  }
  const long double scale = std::sqrt(2.0L * 3.14159265358979323846264338327950288L) / n;
  return {static_cast<double>(acc.real() * scale), static_cast<double>(acc.imag() * scale)};
}

}  // namespace oracle
