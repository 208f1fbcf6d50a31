#pragma once

#include <complex>
#include <string>
#include <vector>

#include "ringlattice/angular.hpp"

// Bloch bands of the ring lattice -cos^2(l phi). Energies are in units of
// hbar*xi and the depth is Omega / xi. Plane waves m = q + 2 l s couple only
// to s +- 1, so each quasimomentum block is a real symmetric tridiagonal
// matrix.

namespace ringlattice::bands {

using cplx = std::complex<double>;

struct LatticeSpec {
  int l = 2;
  double depth = 0.0;
  int s_max = 16;   // plane waves per block: 2 s_max + 1
  int n_bands = 4;

  void validate() const;
};

struct BlochState {
  int l = 1;
  int q = 0;        // quasimomentum in [-l, l)
  int band = 0;
  double energy = 0.0;
  int s_max = 0;
  std::vector<cplx> coeffs;  // coefficient of m = q + 2 l s at index s + s_max

  int momentum(int s) const noexcept { return q + 2 * l * s; }
  /// psi(phi) = (1/sqrt(2 pi)) sum_s c_s e^{i m_s phi}
  cplx value(double phi) const;
  angular::AngularProfile profile(int n_grid) const;
  angular::AngularSpectrum spectrum() const;
};

class BandStructure {
 public:
  BandStructure(LatticeSpec spec, std::vector<BlochState> states, std::vector<std::string> warnings);

  const LatticeSpec& spec() const noexcept { return spec_; }
  const std::vector<BlochState>& states() const noexcept { return states_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  /// Quasimomenta of the first Brillouin zone, -l..l-1.
  std::vector<int> quasimomenta() const;
  const BlochState& state(int q, int band) const;
  /// The 2l states of one band, ordered by q.
  std::vector<BlochState> band(int j) const;

 private:
  LatticeSpec spec_;
  std::vector<BlochState> states_;  // q-major, band-minor
  std::vector<std::string> warnings_;
};

/// V(phi) / (hbar Omega) = -cos^2(l phi)
double potential(double phi, int l);

struct PotentialMap {
  int n_pixels = 0;
  double extent = 0.0;         // x, y in [-extent, extent]
  std::vector<double> values;  // row-major, y rows; NaN outside the annulus

  double coord(int i) const noexcept { return -extent + (i + 0.5) * (2.0 * extent / n_pixels); }
  double at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * n_pixels + ix]; }
};

/// -cos^2(l atan2(y, x)) on a Cartesian grid, masked to rho_inner <= rho <= rho_outer.
PotentialMap potential_grid_xy(int l, int n_pixels, double rho_inner, double rho_outer);

/// Number of potential minima met along the ring, sampled on n points.
int count_wells(int l, int n_samples);

BandStructure solve_bands(const LatticeSpec& spec);

/// Fixes the phase so that psi(0) is real and non-negative. Returns false when
/// psi(0) vanishes and the phase stays ambiguous; the largest coefficient is
/// then made real positive instead.
bool fix_gauge(BlochState& state);

struct WannierState {
  int site = 0;  // in [-l, l-1], centered at phi = site * pi / l
  angular::AngularSpectrum spectrum;
  angular::AngularProfile profile;
};

struct WannierSet {
  std::vector<WannierState> states;
  std::vector<std::string> warnings;
};

/// Theta_n = (2l)^{-1/2} sum_q e^{-i q pi n / l} Psi_q over one band, after
/// gauge fixing each Bloch state.
WannierSet wannier_states(const BandStructure& bands, int band, int n_grid);

/// Inverse relation: Psi_q = (2l)^{-1/2} sum_n e^{i q pi n / l} Theta_n.
angular::AngularSpectrum bloch_from_wannier(const WannierSet& set, int l, int q);

}  // namespace ringlattice::bands
