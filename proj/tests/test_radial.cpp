#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>

#include "oracles.hpp"
#include "ringlattice/angular.hpp"
#include "ringlattice/error.hpp"
#include "ringlattice/quadrature.hpp"
#include "ringlattice/radial.hpp"

using namespace ringlattice;
using namespace ringlattice::radial;
using angular::kPi;

namespace {

double boost_mode(int n, int m, double rho) {
  const double alpha = boost::math::cyl_bessel_j_zero(static_cast<double>(m), n);
  const double norm = std::sqrt(2.0) / std::abs(boost::math::cyl_bessel_j(m + 1, alpha));
  return norm * boost::math::cyl_bessel_j(m, alpha * rho);
}

double boost_gauss(const BoxParams& box, double rho) {
  // normalization from the same integral, evaluated by quadrature
  static double cached_norm = 0.0;
  static double cached_for = -1.0;
  if (cached_for != box.width * 1000 + box.rho0) {
    const double s = oracle::gauss_panels(
        [&](double r) { return std::exp(-(r - box.rho0) * (r - box.rho0) / (box.width * box.width)) * r; },
        0.0, box.a, 2000);
    cached_norm = 1.0 / std::sqrt(s);
    cached_for = box.width * 1000 + box.rho0;
  }
  return cached_norm * std::exp(-0.5 * (rho - box.rho0) * (rho - box.rho0) / (box.width * box.width));
}

const BoxParams kFig5{};

}  // namespace

TEST_CASE("box validation") {
  BoxParams b;
  b.rho0 = 1.0;
  CHECK_THROWS_AS(b.validate(), Error);
  b = BoxParams{};
  b.lambda = 0.0;
  CHECK_THROWS_AS(b.validate(), Error);
  b = BoxParams{};
  b.width = 0.2;
  CHECK_NOTHROW(b.validate());
  CHECK_FALSE(b.warnings().empty());
  CHECK(BoxParams{}.warnings().empty());
  CHECK_THROWS_AS(radial_mode(0, 1, BoxParams{}), Error);
}

TEST_CASE("modes vanish at the wall and on the axis") {
  for (int m : {0, 1, 10, 60}) {
    for (int n : {1, 2, 7, 40}) {
      const auto mode = radial_mode(n, m, kFig5);
      CHECK(std::abs(mode(1.0)) < 1e-10);
      if (m != 0) CHECK(mode(0.0) == 0.0);
      CHECK(mode.alpha == doctest::Approx(boost::math::cyl_bessel_j_zero(double(m), n)).epsilon(1e-13));
      CHECK(mode.energy == doctest::Approx(mode.alpha * mode.alpha));
    }
  }
  CHECK(radial_mode(3, -7, kFig5).alpha == radial_mode(3, 7, kFig5).alpha);
}

TEST_CASE("closed-form normalization of R_10") {
  const auto mode = radial_mode(1, 0, kFig5);
  const double s = oracle::gauss_panels([&](double r) { return mode(r) * mode(r) * r; }, 0.0, 1.0, 200);
  CHECK(std::abs(s - 1.0) < 1e-10);
}

TEST_CASE("orthonormality for n <= 100") {
  for (int m : {0, 10}) {
    // oracle modes from Boost on an independent composite rule
    const int panels = 800;
    std::vector<std::vector<double>> vals;
    std::vector<double> nodes;
    std::vector<double> weights;
    {
      static const double x[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                  0.9061798459386640};
      static const double w[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                  0.4786286704993665, 0.2369268850561891};
      const double h = 1.0 / panels;
      for (int p = 0; p < panels; ++p) {
        for (int i = 0; i < 5; ++i) {
          nodes.push_back((p + 0.5) * h + 0.5 * h * x[i]);
          weights.push_back(0.5 * h * w[i]);
        }
      }
    }
    for (int n = 1; n <= 100; ++n) {
      const auto mode = radial_mode(n, m, kFig5);
      std::vector<double> v;
      for (double r : nodes) v.push_back(mode(r));
      vals.push_back(std::move(v));
      if (n % 33 == 1) {
        for (double r : {0.1, 0.5, 0.93}) CHECK(std::abs(mode(r) - boost_mode(n, m, r)) < 1e-10);
      }
    }
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      for (int j = i; j < 100; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < nodes.size(); ++k) s += weights[k] * nodes[k] * vals[i][k] * vals[j][k];
        worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
      }
    }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("projection of the narrow Gaussian") {
  const auto st = project_initial(kFig5, 10);
  CHECK(st.residual < 1e-3);
  CHECK(st.residual >= -1e-12);
  CHECK(st.modes.size() == 128);  // doubled 32 -> 64 -> 128
  CHECK(st.warnings.empty());
  CHECK(st.norm_squared() <= 1.0 + 1e-12);

  // coefficients against Boost modes and a whole-box quadrature
  for (int n : {1, 5, 40, 80, 128}) {
    const double c = oracle::gauss_panels(
        [&](double r) { return boost_gauss(kFig5, r) * boost_mode(n, 10, r) * r; }, 0.3, 0.7, 1600);
    CHECK(std::abs(c - st.coeffs[n - 1]) < 1e-10);
  }

  const auto neg = project_initial(kFig5, -10);
  CHECK(neg.coeffs == st.coeffs);
  CHECK(neg.m == -10);

  BoxParams fixed = kFig5;
  fixed.n_max = 16;
  const auto small = project_initial(fixed, 10);
  CHECK(small.modes.size() == 16);
  CHECK(small.residual > 1e-3);
  CHECK_FALSE(small.warnings.empty());
}

TEST_CASE("high angular momentum and a Gaussian touching the axis") {
  const auto st = project_initial(kFig5, 300);
  CHECK(st.residual < 1e-3);
  for (int n : {20, 100, static_cast<int>(st.modes.size())}) {
    const double c = oracle::gauss_panels(
        [&](double r) { return boost_gauss(kFig5, r) * boost_mode(n, 300, r) * r; }, 0.3, 0.7, 3200);
    CHECK(std::abs(c - st.coeffs[n - 1]) < 1e-10);
  }

  BoxParams wide = kFig5;
  wide.rho0 = 0.05;
  wide.width = 0.02;
  const auto edge = project_initial(wide, 0);
  CHECK(edge.residual < 1e-3);
  for (int n : {1, 10}) {
    const double c = oracle::gauss_panels(
        [&](double r) { return boost_gauss(wide, r) * boost_mode(n, 0, r) * r; }, 0.0, 1.0, 2000);
    CHECK(std::abs(c - edge.coeffs[n - 1]) < 1e-10);
  }
}

TEST_CASE("evolution is an isometry and conserves energy") {
  const auto st = project_initial(kFig5, 10);
  const auto rule = gauss_legendre(1200, 0.0, 1.0);

  const auto q0 = evolve_radial(st, kFig5, 0.0, rule.nodes);
  double err = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k)
    err += rule.weights[k] * rule.nodes[k] * std::norm(q0[k] - initial_wavefunction(kFig5, rule.nodes[k]));
  CHECK(err == doctest::Approx(st.residual).epsilon(1e-3));

  for (double t : {0.0, 0.013, 10.0}) {
    const auto q = evolve_radial(st, kFig5, t, rule.nodes);
    double norm = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) norm += rule.weights[k] * rule.nodes[k] * std::norm(q[k]);
    CHECK(std::abs(norm - st.norm_squared()) < 1e-9);

    // energy from re-projecting the synthesized field
    double energy = 0.0;
    for (const auto& mode : st.modes) {
      std::complex<double> c{};
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) c += rule.weights[k] * rule.nodes[k] * mode(rule.nodes[k]) * q[k];
      energy += std::norm(c) * mode.energy;
    }
    CHECK(std::abs(energy - st.energy()) < 1e-6 * st.energy());
  }
  CHECK_THROWS_AS(evolve_radial(st, kFig5, -1.0, rule.nodes), Error);
}

TEST_CASE("mean radius") {
  const auto st = project_initial(kFig5, 10);
  const MeanRadius mr(st, kFig5);
  CHECK(mr.quadrature_error() < 1e-12);
  CHECK(std::abs(mr(0.0) - 0.5) < 5e-4);
  // narrow Gaussian: rho0 + L^2 / (2 rho0)
  CHECK(mr(0.0) == doctest::Approx(0.5 + 0.0001).epsilon(1e-8));

  const auto rule = gauss_legendre(1200, 0.0, 1.0);
  for (double t : {0.004, 0.15}) {
    const auto q = evolve_radial(st, kFig5, t, rule.nodes);
    double s = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k)
      s += rule.weights[k] * rule.nodes[k] * rule.nodes[k] * std::norm(q[k]);
    CHECK(std::abs(mr(t) - s / st.norm_squared()) < 1e-9);
  }

  const MeanRadius neg(project_initial(kFig5, -10), kFig5);
  for (double t : {0.0, 0.01, 0.2}) CHECK(std::abs(neg(t) - mr(t)) < 1e-12);
  CHECK(mean_radius(st, kFig5, 0.01) == mr(0.01));
}

TEST_CASE("envelope of an even test signal") {
  // cos(2 pi 40 t) with a Gaussian envelope around t = 0 and t = 0.3
  const double dt = 1e-3;
  std::vector<double> x;
  for (int k = 0; k <= 400; ++k) {
    const double t = k * dt;
    const double a = std::exp(-t * t / (2 * 0.02 * 0.02)) + 0.8 * std::exp(-(t - 0.3) * (t - 0.3) / (2 * 0.02 * 0.02));
    x.push_back(1.0 + a * std::cos(2 * kPi * 40 * t));
  }
  const auto env = even_trace_envelope(x);
  CHECK(env[0] == doctest::Approx(1.0).epsilon(0.02));
  CHECK(env[150] < 0.02);
  CHECK(env[300] == doctest::Approx(0.8).epsilon(0.02));

  const auto cr = collapse_revival(x, dt);
  CHECK(cr.found);
  CHECK(cr.t_collapse < cr.t_revival);
  CHECK(cr.t_revival == doctest::Approx(0.3).epsilon(0.05));

  std::vector<double> flat(100, 0.5);
  for (std::size_t k = 0; k < flat.size(); ++k) flat[k] += 0.1 * std::cos(0.7 * k);
  CHECK_FALSE(collapse_revival(flat, 1.0).found);
}

TEST_CASE("collapse and revival of the mean radius, m = 10") {
  const auto st = project_initial(kFig5, 10);
  const MeanRadius mr(st, kFig5);
  const double dt = 2e-4;
  std::vector<double> trace;
  for (int k = 0; k <= 2000; ++k) trace.push_back(mr(k * dt));
  double lo = 1.0, hi = 0.0;
  for (double v : trace) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(hi - lo > 0.05);  // it oscillates
  const auto cr = collapse_revival(trace, dt);
  CHECK(cr.found);
  CHECK(cr.collapsed <= 0.5 * cr.initial);
  CHECK(cr.revived - cr.collapsed >= 0.5 * (cr.initial - cr.collapsed));
  CHECK(cr.t_revival > cr.t_collapse);
}

TEST_CASE("probability vanishes near the axis for m != 0") {
  for (int m : {1, 10, 60}) {
    const auto st = project_initial(kFig5, m);
    for (double t : {0.0, 0.002, 0.05}) {
      const std::vector<double> r{1e-3, 1e-4, 1e-5};
      const auto q = evolve_radial(st, kFig5, t, r);
      double prev = 1e300;
      for (std::size_t k = 0; k < r.size(); ++k) {
        const double dens = std::norm(q[k]) * r[k];
        CHECK(dens <= prev);
        prev = dens;
      }
      CHECK(prev < 1e-8);
    }
  }
}

TEST_CASE("radial amplitudes on the ring against Boost modes") {
  const auto st = project_initial(kFig5, 60);
  for (double t : {kPi * 1e-3, 2 * kPi * 1e-3}) {
    std::complex<double> want{};
    for (std::size_t n = 1; n <= st.modes.size(); ++n) {
      const double alpha = boost::math::cyl_bessel_j_zero(60.0, static_cast<int>(n));
      const double c = oracle::gauss_panels(
          [&](double r) { return boost_gauss(kFig5, r) * boost_mode(static_cast<int>(n), 60, r) * r; }, 0.3, 0.7,
          800);
      want += c * boost_mode(static_cast<int>(n), 60, 0.5) * std::polar(1.0, -alpha * alpha * t);
    }
    const double r0[1] = {0.5};
    CHECK(std::abs(evolve_radial(st, kFig5, t, r0)[0] - want) < 1e-8);
  }
}

TEST_CASE("assembled field") {
  angular::KickParams kp;
  kp.l = 10;
  kp.pulse_area = 6.0;
  kp.n_loc = 10;
  const auto zeta = angular::apply_kick_bessel(angular::initial_spectrum(10, angular::default_m_max(kp)), kp);
  const int top = populated_m_max(zeta);
  CHECK(top > 250);
  CHECK(top < 400);

  const RadialSet small(kFig5, 20);
  CHECK_THROWS_AS(assemble_field(zeta, small, 0.0, 0.5, 256), Error);

  const RadialSet set(kFig5, top);
  CHECK(set.worst_residual() < 1e-3);
  CHECK(set.warnings().empty());
  CHECK(set.state(-17).m == 17);

  const int n = 2048;
  // t = 0 factorizes: |Phi(phi, 0)|^2 |Q(rho0, 0)|^2. A tight residual keeps
  // the pointwise truncation error of Q_m(rho0, 0) small.
  {
    const auto psi = angular::initial_spectrum(10, 40);
    BoxParams tight = kFig5;
    tight.residual_target = 1e-12;
    const RadialSet few(tight, populated_m_max(psi));
    const auto field = assemble_field(psi, few, 0.0, 0.5, n);
    const auto ring = angular::synthesize(psi, n);
    const double q0 = initial_wavefunction(kFig5, 0.5);
    double peak = 0.0, worst = 0.0;
    for (int j = 0; j < n; ++j) {
      peak = std::max(peak, std::norm(ring[j]) * q0 * q0);
      worst = std::max(worst, std::abs(std::norm(field[j]) - std::norm(ring[j]) * q0 * q0));
    }
    CHECK(worst < 1e-6 * peak);
  }

  const auto near_over_peak = [&](const angular::AngularProfile& f) {
    double peak = 0.0, near = 0.0;
    for (int j = 0; j < f.size(); ++j) {
      peak = std::max(peak, std::norm(f[j]));
      if (std::abs(f.phi(j) - kPi) <= 0.1) near = std::max(near, std::norm(f[j]));
    }
    return near / peak;
  };
  const auto maxima = [&](const angular::AngularProfile& f) {
    double peak = 0.0;
    for (int j = 0; j < f.size(); ++j) peak = std::max(peak, std::norm(f[j]));
    int count = 0;
    for (int j = 1; j + 1 < f.size(); ++j) {
      const double p = std::norm(f[j]);
      if (std::abs(f.phi(j) - kPi) <= 0.5 && p > std::norm(f[j - 1]) && p >= std::norm(f[j + 1]) && p > 1e-3 * peak)
        ++count;
    }
    return count;
  };

  for (double t : {kPi * 1e-3, 2 * kPi * 1e-3}) {
    const auto f = assemble_field(zeta, set, t, 0.5, n);
    double odd = 0.0;
    for (int j = 0; j < n; ++j) odd = std::max(odd, std::abs(std::norm(f[j]) - std::norm(f[(n - j) % n])));
    CHECK(odd < 1e-10);
    if (t < 4e-3) {
      CHECK(near_over_peak(f) < 0.05);
    } else {
      CHECK(maxima(f) >= 5);
    }
  }
}
