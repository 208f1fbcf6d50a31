#pragma once

#include <span>
#include <utility>
#include <vector>

// Bessel functions of integer order, their zeros, and log-space binomials.
// Everything here is a pure function of its arguments.

namespace ringlattice::specfun {

inline constexpr int kMaxOrder = 20000;

/// J_order(x). Negative orders use J_{-n} = (-1)^n J_n, negative x uses
/// J_n(-x) = (-1)^n J_n(x). Absolute error below 1e-12 for |x| <= 100.
double bessel_j(int order, double x);

/// (J_order(x), J_{order+1}(x)) for order >= 0 from a single evaluation.
std::pair<double, double> bessel_j_pair(int order, double x);

/// J_order(x0 + i dx) for i = 0 .. out.size()-1, stepped with Graf's addition
/// theorem from a single direct evaluation. Falls back to direct evaluation
/// when x0 <= 0 or dx is outside (0, 4].
void bessel_j_grid(int order, double x0, double dx, std::span<double> out);

/// The index-th positive zero of J_order (index starts at 1).
double bessel_zero(int order, int index);

/// Ordered positive zeros alpha_1 < alpha_2 < ... of J_order.
class BesselZeroTable {
 public:
  BesselZeroTable(int order, int count);

  int order() const noexcept { return order_; }
  int size() const noexcept { return static_cast<int>(zeros_.size()); }
  std::span<const double> zeros() const noexcept { return zeros_; }

  /// 1-based, matching the radial quantum number.
  double operator()(int index) const { return zeros_.at(index - 1); }

  /// Extends the table to hold at least `count` zeros.
  void extend(int count);

 private:
  int order_;
  std::vector<double> zeros_;
};

/// ln C(a, b); -infinity when b lies outside [0, a].
double log_binomial(int a, int b);

}  // namespace ringlattice::specfun
