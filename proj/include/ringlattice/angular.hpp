#pragma once

#include <complex>
#include <span>
#include <vector>

// Azimuthal dynamics on a ring: the localized initial packet, the short
// lattice pulse acting as a phase mask, free rotor evolution and the
// period-summed far-field propagator. Units: hbar = 1, times enter as xi*t.

namespace ringlattice::angular {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

struct KickParams {
  int l = 10;                // helicity of each beam
  double pulse_area = 6.0;   // Omega * tau
  int n_loc = 10;            // localization exponent N of cos^{2N}(phi/2)
  double xi = 1.0;           // rotational constant hbar / (2 I)

  void validate() const;
};

/// Amplitudes over integer angular momentum m in [-m_max, m_max].
class AngularSpectrum {
 public:
  explicit AngularSpectrum(int m_max);

  int m_max() const noexcept { return m_max_; }
  int size() const noexcept { return static_cast<int>(amps_.size()); }

  cplx& operator[](int m) { return amps_[index(m)]; }
  const cplx& operator[](int m) const { return amps_[index(m)]; }
  /// Amplitude at m, zero outside the stored range.
  cplx at(int m) const noexcept;

  std::span<const cplx> amplitudes() const noexcept { return amps_; }
  std::span<cplx> amplitudes() noexcept { return amps_; }

  double norm_squared() const;

 private:
  std::size_t index(int m) const;

  int m_max_;
  std::vector<cplx> amps_;
};

/// Wave function sampled at phi_j = 2 pi j / n, j = 0..n-1.
class AngularProfile {
 public:
  explicit AngularProfile(int n_grid);

  int size() const noexcept { return static_cast<int>(values_.size()); }
  double phi(int j) const noexcept { return 2.0 * kPi * j / size(); }

  cplx& operator[](int j) { return values_[static_cast<std::size_t>(j)]; }
  const cplx& operator[](int j) const { return values_[static_cast<std::size_t>(j)]; }

  std::span<const cplx> values() const noexcept { return values_; }
  std::span<cplx> values() noexcept { return values_; }

  /// (2 pi / n) sum_j |values_j|^2
  double norm_squared() const;

 private:
  std::vector<cplx> values_;
};

/// Bessel orders kept on each side of the kick sum.
int kick_cutoff(double pulse_area);
/// N + 2 l (ceil(pulse_area / 2) + 20): holds the kicked initial state.
int default_m_max(const KickParams& params);

AngularSpectrum initial_spectrum(int n_loc, int m_max);
AngularProfile initial_profile(int n_loc, int n_grid);

/// Diffraction by the lattice pulse, summed over Bessel orders. m_max_out = 0
/// selects the smallest admissible range.
AngularSpectrum apply_kick_bessel(const AngularSpectrum& spec, const KickParams& params,
                                  int m_max_out = 0);
/// The same pulse applied pointwise as exp(i Omega tau cos^2(l phi)).
AngularProfile apply_kick_grid(const AngularProfile& profile, const KickParams& params);

AngularSpectrum free_evolve(const AngularSpectrum& spec, double xi, double t);

/// Fourier synthesis (1/sqrt(2 pi)) sum_m a_m e^{i m phi_j}.
AngularProfile synthesize(const AngularSpectrum& spec, int n_grid);
/// Trapezoidal projection onto e^{i m phi}, |m| <= m_max.
AngularSpectrum project(const AngularProfile& profile, int m_max);

struct FarFieldOptions {
  bool keep_chirp = true;     // false drops exp(i phi'^2 / 4 xi t) (asymptotic form)
  double tolerance = 1e-8;    // max allowed full-grid vs half-grid difference
};

struct FarFieldDiagnostics {
  double quadrature_error = 0.0;  // max |full - half grid| over output points
  double edge_term = 0.0;         // max modulus of the p = +-p_max terms
};

/// Free evolution through the period-summed propagator:
/// Phi(phi, t) = (2 i xi t)^{-1/2} sum_{|p|<=p_max} e^{i (phi - 2 pi p)^2 / 4 xi t}
///               F((phi - 2 pi p) / 2 xi t),
/// with F the transform of the chirped initial function over one period.
AngularProfile far_field_profile(const AngularProfile& initial, double xi, double t, int p_max,
                                 int n_grid_out, const FarFieldOptions& options = {},
                                 FarFieldDiagnostics* diagnostics = nullptr);

/// |exp(i m phi - i xi_t m^2) - (4 pi i xi_t)^{-1/2} int e^{i m u} e^{i (phi-u)^2 / 4 xi_t} du|
double identity_check(int m, double phi, double xi_t);

/// n closest to pulse_area / 2: the strongest diffraction order.
int dominant_order(double pulse_area);
/// pi / (2 xi Omega tau l), when the strongest counterrotating packets meet.
double meeting_time(const KickParams& params);
/// 4 xi n l
double group_velocity(int n, const KickParams& params);
/// Angular half-width 2 xi t sqrt(N / 2) of each diffracted packet.
double packet_half_width(const KickParams& params, double t);
/// True once the dominant clockwise and anticlockwise packets overlap.
bool dominant_packets_overlap(const KickParams& params, double t);

/// Kinetic phase xi * tau * m_max^2 accrued during a pulse of physical length
/// tau; the phase-mask picture needs it small.
double raman_nath_ratio(double xi, double tau, int m_max);
inline constexpr double kRamanNathWarn = 0.1;

}  // namespace ringlattice::angular
