#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "ringlattice/angular.hpp"

// Radial motion in a hard-walled cylinder of radius a (a = 1 sets the length
// unit, hbar = 1). Energies are lambda * alpha^2 with alpha the zeros of J_|m|.
// The radial problem depends on m only through m^2, so every routine works
// with |m|.

namespace ringlattice::radial {

using cplx = std::complex<double>;

struct BoxParams {
  double a = 1.0;
  double lambda = 1.0;
  double rho0 = 0.5;
  double width = 0.01;           // Gaussian width L
  int n_max = 0;                 // 0: doubled from 32 until the residual target is met
  double residual_target = 1e-3;

  void validate() const;
  /// Soft problems, such as a packet that is not narrow compared with the box.
  std::vector<std::string> warnings() const;
};

struct RadialMode {
  int n = 1;
  int m = 0;
  double alpha = 0.0;
  double energy = 0.0;  // lambda * alpha^2
  double norm = 0.0;    // sqrt(2) / (a |J_{m+1}(alpha)|)
  double a = 1.0;

  double operator()(double rho) const;
};

RadialMode radial_mode(int n, int m, const BoxParams& box);

struct RadialState {
  int m = 0;
  std::vector<RadialMode> modes;
  std::vector<double> coeffs;  // c_n, real for the real Gaussian
  double residual = 1.0;       // 1 - sum c_n^2
  std::vector<std::string> warnings;

  double norm_squared() const;
  /// sum c_n^2 E_n, conserved by the evolution.
  double energy() const;
};

/// Normalized initial radial function, integral of Q^2 rho over [0, a] is 1.
double initial_wavefunction(const BoxParams& box, double rho);

RadialState project_initial(const BoxParams& box, int m);

/// Q_m(rho, t) at the given radii.
std::vector<cplx> evolve_radial(const RadialState& state, const BoxParams& box, double t,
                                std::span<const double> rho);

/// <rho(t)> for one state. The matrix of rho between modes is built once on a
/// Gauss-Legendre grid with at least 4 n_max nodes and checked against twice
/// that many. The state is renormalized by its captured weight.
class MeanRadius {
 public:
  MeanRadius(const RadialState& state, const BoxParams& box);

  double operator()(double t) const;
  /// Largest change of a matrix element between the two quadrature grids.
  double quadrature_error() const noexcept { return quadrature_error_; }

 private:
  std::vector<double> coeffs_;
  std::vector<double> energies_;
  std::vector<double> matrix_;
  double weight_ = 1.0;
  double quadrature_error_ = 0.0;
};

double mean_radius(const RadialState& state, const BoxParams& box, double t);

/// Oscillation envelope of a trace sampled at t_k = k dt, k = 0..K, that is
/// even in t (real initial coefficients make <rho(t)> even). The trace minus
/// its mean is extended evenly to a period of 2K samples and the envelope is
/// the modulus of its analytic signal.
std::vector<double> even_trace_envelope(std::span<const double> trace);

struct CollapseRevival {
  double initial = 0.0;    // envelope at t = 0
  double collapsed = 0.0;  // envelope minimum before the revival
  double t_collapse = 0.0;
  double revived = 0.0;    // envelope at the revival
  double t_revival = 0.0;
  bool found = false;      // decay >= 50%, then recovery >= 50% of the decay
};

/// Earliest revival that follows a collapse of the envelope to half its
/// initial value and recovers at least half of the lost amplitude.
CollapseRevival collapse_revival(std::span<const double> trace, double dt);

/// Projected states for |m| = 0 .. m_abs_max, computed in parallel across m.
class RadialSet {
 public:
  RadialSet(const BoxParams& box, int m_abs_max);

  const BoxParams& box() const noexcept { return box_; }
  int m_abs_max() const noexcept { return static_cast<int>(states_.size()) - 1; }
  const RadialState& state(int m) const;
  /// Largest completeness residual over all m.
  double worst_residual() const;
  std::vector<std::string> warnings() const;

 private:
  BoxParams box_;
  std::vector<RadialState> states_;
};

/// Largest |m| with |zeta_m| > threshold.
int populated_m_max(const angular::AngularSpectrum& zeta, double threshold = 1e-10);

/// Psi(rho, phi, t) = sum_m zeta_m e^{i m phi} Q_m(rho, t) / sqrt(2 pi) on an
/// n_grid angular grid. Every m with |zeta_m| > 1e-10 must be covered by the set.
angular::AngularProfile assemble_field(const angular::AngularSpectrum& zeta, const RadialSet& states,
                                       double t, double rho, int n_grid);

}  // namespace ringlattice::radial
