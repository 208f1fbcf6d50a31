#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "ringlattice/bands.hpp"
#include "ringlattice/error.hpp"

using namespace ringlattice::bands;
using ringlattice::angular::kPi;
using ringlattice::Error;

namespace {

double inner_norm(const ringlattice::angular::AngularSpectrum& a) { return a.norm_squared(); }

cplx inner(const ringlattice::angular::AngularSpectrum& a, const ringlattice::angular::AngularSpectrum& b) {
  cplx s{};
  const int mm = std::min(a.m_max(), b.m_max());
  for (int m = -mm; m <= mm; ++m) s += std::conj(a[m]) * b[m];
  return s;
}

}  // namespace

TEST_CASE("potential values") {
  CHECK(potential(0.0, 2) == -1.0);
  CHECK(std::abs(potential(kPi / 4, 2)) < 1e-30);
  for (double phi : {0.1, 0.7, 2.3}) {
    for (int l : {1, 2, 5}) CHECK(potential(phi + kPi / l, l) == doctest::Approx(potential(phi, l)).epsilon(1e-12));
  }
}

TEST_CASE("potential map and well count") {
  CHECK(count_wells(2, 720) == 4);
  CHECK(count_wells(4, 720) == 8);
  const auto map = potential_grid_xy(2, 128, 0.6, 1.0);
  int inside = 0;
  for (int iy = 0; iy < map.n_pixels; ++iy) {
    for (int ix = 0; ix < map.n_pixels; ++ix) {
      const double v = map.at(ix, iy);
      const double rho = std::hypot(map.coord(ix), map.coord(iy));
      if (rho >= 0.6 && rho <= 1.0) {
        ++inside;
        CHECK(v >= -1.0);
        CHECK(v <= 0.0);
      } else {
        CHECK(std::isnan(v));
      }
    }
  }
  CHECK(inside > 0);
  CHECK_THROWS_AS(potential_grid_xy(2, 32, 0.5, 1.0), Error);
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(solve_bands(LatticeSpec{2, 1.0, 8, 4}), Error);
  CHECK_THROWS_AS(solve_bands(LatticeSpec{0, 1.0, 16, 4}), Error);
  CHECK_THROWS_AS(solve_bands(LatticeSpec{2, -1.0, 16, 4}), Error);
}

TEST_CASE("Brillouin zone for l = 2") {
  const auto b = solve_bands(LatticeSpec{2, 5.0, 12, 3});
  CHECK(b.quasimomenta() == std::vector<int>{-2, -1, 0, 1});
  for (int j = 0; j < 3; ++j) CHECK(b.band(j).size() == 4);
}

TEST_CASE("free rotor folded into the zone") {
  for (int l : {1, 2, 3, 10}) {
    const LatticeSpec spec{l, 0.0, 10, 4};
    const auto b = solve_bands(spec);
    for (int q = -l; q < l; ++q) {
      std::vector<double> free;
      for (int s = -spec.s_max; s <= spec.s_max; ++s) free.push_back(double(q + 2 * l * s) * (q + 2 * l * s));
      std::sort(free.begin(), free.end());
      for (int j = 0; j < spec.n_bands; ++j) CHECK(std::abs(b.state(q, j).energy - free[j]) < 1e-12);
    }
  }
  const auto b = solve_bands(LatticeSpec{2, 0.0, 10, 4});
  CHECK(std::abs(b.state(0, 0).energy - 0.0) < 1e-12);
  CHECK(std::abs(b.state(1, 0).energy - 1.0) < 1e-12);
  CHECK(std::abs(b.state(-1, 0).energy - 1.0) < 1e-12);
  CHECK(std::abs(b.state(-2, 0).energy - 4.0) < 1e-12);
}

TEST_CASE("eigen residual and block orthonormality") {
  const LatticeSpec spec{3, 37.0, 14, 5};
  const auto b = solve_bands(spec);
  const int dim = 2 * spec.s_max + 1;
  for (int q = -spec.l; q < spec.l; ++q) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
      const double m = q + 2.0 * spec.l * (i - spec.s_max);
      h(i, i) = m * m - spec.depth / 2;
      if (i + 1 < dim) h(i, i + 1) = h(i + 1, i) = -spec.depth / 4;
    }
    const double hnorm = h.norm();
    for (int j = 0; j < spec.n_bands; ++j) {
      const auto& st = b.state(q, j);
      Eigen::VectorXcd v(dim);
      for (int i = 0; i < dim; ++i) v(i) = st.coeffs[i];
      CHECK((h.cast<cplx>() * v - st.energy * v).norm() < 1e-10 * hnorm);
      for (int k = 0; k < spec.n_bands; ++k) {
        cplx dot{};
        for (int i = 0; i < dim; ++i) dot += std::conj(st.coeffs[i]) * b.state(q, k).coeffs[i];
        CHECK(std::abs(dot - (j == k ? 1.0 : 0.0)) < 1e-10);
      }
      if (j > 0) CHECK(st.energy >= b.state(q, j - 1).energy);
    }
  }
}

TEST_CASE("band energies agree with a dense plane-wave Hamiltonian") {
  // Full Hamiltonian on |m| <= M with potential matrix elements from quadrature.
  const int l = 2;
  const double depth = 23.0;
  const int M = 60;
  const int dim = 2 * M + 1;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (int a = 0; a < dim; ++a) {
    for (int c = 0; c < dim; ++c) {
      const int dm = (c - M) - (a - M);
      auto f = [&](double phi) { return -depth * std::pow(std::cos(l * phi), 2) * std::polar(1.0, dm * phi); };
      h(a, c) = oracle::gauss_panels(f, 0.0, 2.0 * kPi, 64) / (2.0 * kPi);
    }
    h(a, a) += double(a - M) * (a - M);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> dense(h);
  std::vector<double> want(dense.eigenvalues().data(), dense.eigenvalues().data() + 12);

  const auto b = solve_bands(LatticeSpec{l, depth, 14, 3});
  std::vector<double> got;
  for (const auto& st : b.states()) got.push_back(st.energy);
  std::sort(got.begin(), got.end());
  for (int i = 0; i < 12; ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-10));
}

TEST_CASE("translation eigenvalue and 2 pi periodicity") {
  for (int l : {1, 2, 4}) {
    const auto b = solve_bands(LatticeSpec{l, 30.0, 12, 3});
    const int n = 64 * 2 * l;
    const int shift = n / (2 * l);
    for (const auto& st : b.states()) {
      const auto prof = st.profile(n);
      const cplx expect = std::polar(1.0, -kPi * st.q / l);
      for (int j = 0; j < n; ++j) {
        // (T psi)(phi) = psi(phi - pi / l)
        CHECK(std::abs(prof[(j - shift + n) % n] - expect * prof[j]) < 1e-10);
      }
      for (double phi : {0.0, 0.4, 1.9}) CHECK(std::abs(st.value(phi + 2 * kPi) - st.value(phi)) < 1e-10);
      if (st.q == -l) CHECK(std::abs(expect - cplx(-1.0, 0.0)) < 1e-15);
    }
  }
}

TEST_CASE("energies never increase with a larger basis") {
  const auto small = solve_bands(LatticeSpec{2, 80.0, 9, 4});
  const auto big = solve_bands(LatticeSpec{2, 80.0, 15, 4});
  for (int q = -2; q < 2; ++q) {
    for (int j = 0; j < 4; ++j) CHECK(big.state(q, j).energy <= small.state(q, j).energy + 1e-12);
  }
}

TEST_CASE("deep lattice: flat lowest band") {
  const auto b = solve_bands(LatticeSpec{2, 400.0, 30, 2});
  const auto b2 = solve_bands(LatticeSpec{2, 400.0, 60, 2});
  double lo = 1e300, hi = -1e300, second = 1e300;
  for (int q = -2; q < 2; ++q) {
    lo = std::min(lo, b.state(q, 0).energy);
    hi = std::max(hi, b.state(q, 0).energy);
    second = std::min(second, b.state(q, 1).energy);
    CHECK(std::abs(b.state(q, 0).energy - b2.state(q, 0).energy) < 1e-9);
  }
  CHECK((hi - lo) / (second - hi) < 1e-2);
  CHECK(b.warnings().empty());
}

TEST_CASE("tail warning for an undersized basis") {
  const auto b = solve_bands(LatticeSpec{1, 1e4, 6, 1});
  CHECK_FALSE(b.warnings().empty());
}

TEST_CASE("Wannier states") {
  const int l = 2;
  const auto b = solve_bands(LatticeSpec{l, 400.0, 30, 2});
  const int n = 1024;
  const auto set = wannier_states(b, 0, n);
  REQUIRE(set.states.size() == 2 * l);
  CHECK(set.warnings.empty());

  for (std::size_t a = 0; a < set.states.size(); ++a) {
    for (std::size_t c = 0; c < set.states.size(); ++c) {
      CHECK(std::abs(inner(set.states[a].spectrum, set.states[c].spectrum) - (a == c ? 1.0 : 0.0)) < 1e-8);
      cplx g{};
      for (int j = 0; j < n; ++j) g += std::conj(set.states[a].profile[j]) * set.states[c].profile[j];
      g *= 2.0 * kPi / n;
      CHECK(std::abs(g - (a == c ? 1.0 : 0.0)) < 1e-8);
    }
  }

  const int shift = n / (2 * l);
  for (std::size_t k = 0; k + 1 < set.states.size(); ++k) {
    const auto& cur = set.states[k].profile;
    const auto& nxt = set.states[k + 1].profile;
    CHECK(set.states[k + 1].site == set.states[k].site + 1);
    for (int j = 0; j < n; ++j) CHECK(std::abs(nxt[j] - cur[(j - shift + n) % n]) < 1e-8);
  }

  // localization: probability inside the well centered at site * pi / l
  for (const auto& w : set.states) {
    const double center = w.site * kPi / l;
    double inside = 0.0;
    for (int j = 0; j < n; ++j) {
      double d = std::remainder(w.profile.phi(j) - center, 2.0 * kPi);
      if (std::abs(d) <= kPi / (2 * l)) inside += std::norm(w.profile[j]);
    }
    inside *= 2.0 * kPi / n;
    CHECK(inside >= 0.99);
  }

  // back to Bloch states
  for (int q = -l; q < l; ++q) {
    const auto psi = bloch_from_wannier(set, l, q);
    const auto ref = b.state(q, 0).spectrum();
    for (int m = -ref.m_max(); m <= ref.m_max(); ++m) CHECK(std::abs(psi[m] - ref[m]) < 1e-10);
  }
  CHECK(inner_norm(set.states[0].spectrum) == doctest::Approx(1.0));
}

TEST_CASE("Wannier densities do not depend on Bloch phases") {
  const int l = 3;
  const auto b = solve_bands(LatticeSpec{l, 60.0, 20, 2});
  const auto ref = wannier_states(b, 0, 512);

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
  std::vector<BlochState> scrambled = b.states();
  for (auto& st : scrambled) {
    const cplx ph = std::polar(1.0, ang(rng));
    for (auto& c : st.coeffs) c *= ph;
  }
  const BandStructure other(b.spec(), scrambled, {});
  const auto set = wannier_states(other, 0, 512);
  for (std::size_t k = 0; k < set.states.size(); ++k) {
    for (int j = 0; j < 512; ++j) {
      CHECK(std::abs(std::norm(set.states[k].profile[j]) - std::norm(ref.states[k].profile[j])) < 1e-10);
    }
  }
}

TEST_CASE("ambiguous gauge is reported") {
  // second band at the zone edge is sin(l phi)-like and vanishes at phi = 0
  const auto b = solve_bands(LatticeSpec{2, 10.0, 12, 2});
  const auto set = wannier_states(b, 1, 256);
  CHECK_FALSE(set.warnings.empty());
  CHECK(set.states.size() == 4);
}
