#include "ringlattice/bands.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ringlattice/error.hpp"

namespace ringlattice::bands {

using angular::kPi;

namespace {

constexpr double kTailWarn = 1e-8;
constexpr double kGaugeFloor = 1e-8;

int spectrum_range(const LatticeSpec& spec) { return spec.l + 2 * spec.l * spec.s_max; }

}  // namespace

void LatticeSpec::validate() const {
  if (l < 1) fail(ErrorKind::domain, "lattice helicity l must be a positive integer");
  if (!std::isfinite(depth) || depth < 0.0) fail(ErrorKind::domain, "lattice depth must be >= 0");
  if (n_bands < 1) fail(ErrorKind::domain, "n_bands must be positive");
  if (s_max < n_bands + 5)
    fail(ErrorKind::domain, "s_max must be at least n_bands + 5 (got " + std::to_string(s_max) + ")");
}

cplx BlochState::value(double phi) const {
  cplx acc{};
  for (int s = -s_max; s <= s_max; ++s) {
    acc += coeffs[static_cast<std::size_t>(s + s_max)] * std::polar(1.0, momentum(s) * phi);
  }
  return acc / std::sqrt(2.0 * kPi);
}

angular::AngularSpectrum BlochState::spectrum() const {
  angular::AngularSpectrum out(l + 2 * l * s_max);
  for (int s = -s_max; s <= s_max; ++s) out[momentum(s)] = coeffs[static_cast<std::size_t>(s + s_max)];
  return out;
}

angular::AngularProfile BlochState::profile(int n_grid) const {
  return angular::synthesize(spectrum(), n_grid);
}

BandStructure::BandStructure(LatticeSpec spec, std::vector<BlochState> states,
                             std::vector<std::string> warnings)
    : spec_(spec), states_(std::move(states)), warnings_(std::move(warnings)) {}

std::vector<int> BandStructure::quasimomenta() const {
  std::vector<int> qs;
  for (int q = -spec_.l; q < spec_.l; ++q) qs.push_back(q);
  return qs;
}

const BlochState& BandStructure::state(int q, int band) const {
  if (q < -spec_.l || q >= spec_.l) fail(ErrorKind::domain, "quasimomentum outside the Brillouin zone");
  if (band < 0 || band >= spec_.n_bands) fail(ErrorKind::domain, "band index out of range");
  return states_[static_cast<std::size_t>((q + spec_.l) * spec_.n_bands + band)];
}

std::vector<BlochState> BandStructure::band(int j) const {
  std::vector<BlochState> out;
  for (int q = -spec_.l; q < spec_.l; ++q) out.push_back(state(q, j));
  return out;
}

double potential(double phi, int l) {
  const double c = std::cos(l * phi);
  return -c * c;
}

PotentialMap potential_grid_xy(int l, int n_pixels, double rho_inner, double rho_outer) {
  if (l < 1) fail(ErrorKind::domain, "potential_grid_xy: l must be positive");
  if (n_pixels < 64) fail(ErrorKind::domain, "potential_grid_xy: need at least 64 pixels");
  if (!(rho_inner >= 0.0 && rho_outer > rho_inner))
    fail(ErrorKind::domain, "potential_grid_xy: bad annulus");
  PotentialMap map;
  map.n_pixels = n_pixels;
  map.extent = rho_outer;
  map.values.resize(static_cast<std::size_t>(n_pixels) * n_pixels);
  for (int iy = 0; iy < n_pixels; ++iy) {
    for (int ix = 0; ix < n_pixels; ++ix) {
      const double x = map.coord(ix);
      const double y = map.coord(iy);
      const double rho = std::hypot(x, y);
      map.values[static_cast<std::size_t>(iy) * n_pixels + ix] =
          (rho >= rho_inner && rho <= rho_outer) ? potential(std::atan2(y, x), l)
                                                 : std::numeric_limits<double>::quiet_NaN();
    }
  }
  return map;
}

int count_wells(int l, int n_samples) {
  int wells = 0;
  for (int j = 0; j < n_samples; ++j) {
    const auto at = [&](int k) { return potential(2.0 * kPi * ((k + n_samples) % n_samples) / n_samples, l); };
    if (at(j) < at(j - 1) && at(j) <= at(j + 1)) ++wells;
  }
  return wells;
}

bool fix_gauge(BlochState& state) {
  const cplx at_origin = state.value(0.0);
  double norm = 0.0;
  for (const auto& c : state.coeffs) norm = std::max(norm, std::abs(c));
  cplx phase;
  bool ok = true;
  if (std::abs(at_origin) > kGaugeFloor * norm) {
    phase = std::conj(at_origin) / std::abs(at_origin);
  } else {
    ok = false;
    // largest coefficient (first on ties) made real positive
    std::size_t best = 0;
    for (std::size_t i = 1; i < state.coeffs.size(); ++i) {
      if (std::abs(state.coeffs[i]) > std::abs(state.coeffs[best]) * (1.0 + 1e-12)) best = i;
    }
    phase = std::conj(state.coeffs[best]) / std::abs(state.coeffs[best]);
  }
  for (auto& c : state.coeffs) c *= phase;
  return ok;
}

BandStructure solve_bands(const LatticeSpec& spec) {
  spec.validate();
  const int dim = 2 * spec.s_max + 1;
  std::vector<BlochState> states;
  std::vector<std::string> warnings;
  states.reserve(static_cast<std::size_t>(2 * spec.l * spec.n_bands));

  for (int q = -spec.l; q < spec.l; ++q) {
    Eigen::VectorXd diag(dim);
    Eigen::VectorXd off = Eigen::VectorXd::Constant(dim - 1, -spec.depth / 4.0);
    for (int s = -spec.s_max; s <= spec.s_max; ++s) {
      const double m = q + 2.0 * spec.l * s;
      diag(s + spec.s_max) = m * m - spec.depth / 2.0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success)
      fail(ErrorKind::accuracy, "solve_bands: eigensolver failed at q = " + std::to_string(q));

    for (int j = 0; j < spec.n_bands; ++j) {
      BlochState st;
      st.l = spec.l;
      st.q = q;
      st.band = j;
      st.energy = solver.eigenvalues()(j);
      st.s_max = spec.s_max;
      st.coeffs.resize(static_cast<std::size_t>(dim));
      for (int i = 0; i < dim; ++i) st.coeffs[static_cast<std::size_t>(i)] = solver.eigenvectors()(i, j);
      fix_gauge(st);
      const double tail = std::max(std::abs(st.coeffs.front()), std::abs(st.coeffs.back()));
      if (tail > kTailWarn) {
        warnings.push_back("band " + std::to_string(j) + ", q = " + std::to_string(q) +
                           ": tail coefficient " + std::to_string(tail) + " exceeds 1e-8; raise s_max");
      }
      states.push_back(std::move(st));
    }
  }
  return BandStructure(spec, std::move(states), std::move(warnings));
}

WannierSet wannier_states(const BandStructure& bands, int band, int n_grid) {
  const auto& spec = bands.spec();
  const int l = spec.l;
  WannierSet set;
  std::vector<BlochState> bloch = bands.band(band);
  if (static_cast<int>(bloch.size()) != 2 * l)
    fail(ErrorKind::domain, "wannier_states: band does not hold 2l Bloch states");
  for (auto& st : bloch) {
    if (!fix_gauge(st)) {
      set.warnings.push_back("band " + std::to_string(band) + ", q = " + std::to_string(st.q) +
                             ": Bloch function vanishes at phi = 0, gauge is ambiguous");
    }
  }
  const double norm = 1.0 / std::sqrt(2.0 * l);
  for (int n = -l; n < l; ++n) {
    angular::AngularSpectrum spec_n(spectrum_range(spec));
    for (const auto& st : bloch) {
      const cplx phase = norm * std::polar(1.0, -kPi * st.q * n / l);
      for (int s = -st.s_max; s <= st.s_max; ++s) {
        spec_n[st.momentum(s)] += phase * st.coeffs[static_cast<std::size_t>(s + st.s_max)];
      }
    }
    auto profile = angular::synthesize(spec_n, n_grid);
    set.states.push_back(WannierState{n, std::move(spec_n), std::move(profile)});
  }
  return set;
}

angular::AngularSpectrum bloch_from_wannier(const WannierSet& set, int l, int q) {
  if (set.states.empty()) fail(ErrorKind::domain, "bloch_from_wannier: empty Wannier set");
  angular::AngularSpectrum out(set.states.front().spectrum.m_max());
  const double norm = 1.0 / std::sqrt(2.0 * l);
  for (const auto& w : set.states) {
    const cplx phase = norm * std::polar(1.0, kPi * q * w.site / l);
    for (int m = -out.m_max(); m <= out.m_max(); ++m) out[m] += phase * w.spectrum[m];
  }
  return out;
}

}  // namespace ringlattice::bands
