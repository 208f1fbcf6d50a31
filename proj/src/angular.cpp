#include "ringlattice/angular.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ringlattice/error.hpp"
#include "ringlattice/quadrature.hpp"
#include "ringlattice/specfun.hpp"

namespace ringlattice::angular {

namespace {

constexpr cplx kI{0.0, 1.0};

// e^{2 pi i k / n}, k = 0..n-1
std::vector<cplx> unit_roots(int n) {
  std::vector<cplx> w(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double a = 2.0 * kPi * k / n;
    w[static_cast<std::size_t>(k)] = {std::cos(a), std::sin(a)};
  }
  return w;
}

std::size_t root_index(long long m, long long j, long long n) {
  long long r = (m * j) % n;
  if (r < 0) r += n;
  return static_cast<std::size_t>(r);
}

cplx i_power(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

void KickParams::validate() const {
  if (l < 1) fail(ErrorKind::domain, "helicity l must be a positive integer");
  if (!std::isfinite(pulse_area) || pulse_area < 0.0)
    fail(ErrorKind::domain, "pulse area must be finite and non-negative");
  if (n_loc < 1) fail(ErrorKind::domain, "localization exponent N must be positive");
  if (!std::isfinite(xi) || xi <= 0.0) fail(ErrorKind::domain, "xi must be positive");
}

AngularSpectrum::AngularSpectrum(int m_max) : m_max_(m_max) {
  if (m_max < 0) fail(ErrorKind::domain, "spectrum range must be non-negative");
  amps_.assign(static_cast<std::size_t>(2 * m_max + 1), cplx{});
}

std::size_t AngularSpectrum::index(int m) const {
  if (m < -m_max_ || m > m_max_)
    fail(ErrorKind::truncation, "angular momentum " + std::to_string(m) + " outside stored range");
  return static_cast<std::size_t>(m + m_max_);
}

cplx AngularSpectrum::at(int m) const noexcept {
  if (m < -m_max_ || m > m_max_) return {};
  return amps_[static_cast<std::size_t>(m + m_max_)];
}

double AngularSpectrum::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return s;
}

AngularProfile::AngularProfile(int n_grid) {
  if (n_grid < 1) fail(ErrorKind::domain, "profile grid must be positive");
  values_.assign(static_cast<std::size_t>(n_grid), cplx{});
}

double AngularProfile::norm_squared() const {
  double s = 0.0;
  for (const auto& v : values_) s += std::norm(v);
  return s * 2.0 * kPi / size();
}

int kick_cutoff(double pulse_area) { return static_cast<int>(std::ceil(pulse_area / 2.0)) + 20; }

int default_m_max(const KickParams& params) {
  return params.n_loc + 2 * params.l * kick_cutoff(params.pulse_area);
}

AngularSpectrum initial_spectrum(int n_loc, int m_max) {
  if (n_loc < 0) fail(ErrorKind::domain, "localization exponent must be non-negative");
  if (m_max < n_loc)
    fail(ErrorKind::truncation, "initial_spectrum: m_max " + std::to_string(m_max) +
                                    " below N = " + std::to_string(n_loc));
  AngularSpectrum spec(m_max);
  // long double keeps the unit norm to ~1e-16 for N in the thousands
  using ld = long double;
  const auto lfact = [](int k) { return std::lgamma(static_cast<ld>(k) + 1); };
  const ld log_norm = 0.5L * (lfact(4 * n_loc) - 2 * lfact(2 * n_loc));
  for (int m = -n_loc; m <= n_loc; ++m) {
    const int a = std::abs(m);
    const ld lb = lfact(2 * n_loc) - (lfact(n_loc + a) + lfact(n_loc - a));
    spec[m] = static_cast<double>(std::exp(lb - log_norm));
  }
  return spec;
}

AngularProfile initial_profile(int n_loc, int n_grid) {
  if (n_loc < 0) fail(ErrorKind::domain, "localization exponent must be non-negative");
  if (n_grid <= 4 * n_loc) fail(ErrorKind::domain, "initial_profile: grid does not resolve the packet");
  AngularProfile profile(n_grid);
  // C_N = 2^{2N} / sqrt(2 pi C(4N, 2N))
  const double log_c = 2.0 * n_loc * std::log(2.0) -
                       0.5 * (std::log(2.0 * kPi) + specfun::log_binomial(4 * n_loc, 2 * n_loc));
  const double c = std::exp(log_c);
  for (int j = 0; j < n_grid; ++j) {
    profile[j] = c * std::pow(std::cos(0.5 * profile.phi(j)), 2 * n_loc);
  }
  return profile;
}

AngularSpectrum apply_kick_bessel(const AngularSpectrum& spec, const KickParams& params,
                                  int m_max_out) {
  params.validate();
  const int cut = kick_cutoff(params.pulse_area);
  const int needed = spec.m_max() + 2 * params.l * cut;
  if (m_max_out == 0) m_max_out = needed;
  if (m_max_out < needed)
    fail(ErrorKind::truncation, "apply_kick_bessel: output range " + std::to_string(m_max_out) +
                                    " below required " + std::to_string(needed));

  const double x = 0.5 * params.pulse_area;
  std::vector<cplx> weight(static_cast<std::size_t>(2 * cut + 1));
  for (int n = -cut; n <= cut; ++n) {
    weight[static_cast<std::size_t>(n + cut)] = i_power(n) * specfun::bessel_j(n, x);
  }
  const cplx global = std::polar(1.0, x);

  AngularSpectrum out(m_max_out);
  for (int m = -m_max_out; m <= m_max_out; ++m) {
    cplx acc{};
    for (int n = -cut; n <= cut; ++n) {
      const int src = m - 2 * n * params.l;
      if (src < -spec.m_max() || src > spec.m_max()) continue;
      acc += weight[static_cast<std::size_t>(n + cut)] * spec[src];
    }
    out[m] = global * acc;
  }
  return out;
}

AngularProfile apply_kick_grid(const AngularProfile& profile, const KickParams& params) {
  params.validate();
  const int n = profile.size();
  if (n < 16 * params.l || n <= 4 * params.n_loc)
    fail(ErrorKind::domain, "apply_kick_grid: grid of " + std::to_string(n) +
                                " points does not resolve the lattice mask");
  const auto roots = unit_roots(n);
  AngularProfile out(n);
  for (int j = 0; j < n; ++j) {
    const double c = roots[root_index(params.l, j, n)].real();
    out[j] = profile[j] * std::polar(1.0, params.pulse_area * c * c);
  }
  return out;
}

AngularSpectrum free_evolve(const AngularSpectrum& spec, double xi, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) fail(ErrorKind::domain, "free_evolve: t must be >= 0");
  if (!std::isfinite(xi)) fail(ErrorKind::domain, "free_evolve: xi must be finite");
  AngularSpectrum out(spec.m_max());
  for (int m = -spec.m_max(); m <= spec.m_max(); ++m) {
    const double m2 = static_cast<double>(m) * m;
    out[m] = spec[m] * std::polar(1.0, -xi * t * m2);
  }
  return out;
}

AngularProfile synthesize(const AngularSpectrum& spec, int n_grid) {
  AngularProfile out(n_grid);
  const auto roots = unit_roots(n_grid);
  const double scale = 1.0 / std::sqrt(2.0 * kPi);
  const int mm = spec.m_max();
  for (int j = 0; j < n_grid; ++j) {
    cplx acc{};
    for (int m = -mm; m <= mm; ++m) acc += spec[m] * roots[root_index(m, j, n_grid)];
    out[j] = scale * acc;
  }
  return out;
}

AngularSpectrum project(const AngularProfile& profile, int m_max) {
  const int n = profile.size();
  if (2 * m_max + 1 > n)
    fail(ErrorKind::domain, "project: grid too coarse for the requested momentum range");
  const auto roots = unit_roots(n);
  const double scale = std::sqrt(2.0 * kPi) / n;
  AngularSpectrum out(m_max);
  for (int m = -m_max; m <= m_max; ++m) {
    cplx acc{};
    for (int j = 0; j < n; ++j) acc += profile[j] * std::conj(roots[root_index(m, j, n)]);
    out[m] = scale * acc;
  }
  return out;
}

AngularProfile far_field_profile(const AngularProfile& initial, double xi, double t, int p_max,
                                 int n_grid_out, const FarFieldOptions& options,
                                 FarFieldDiagnostics* diagnostics) {
  if (!(t > 0.0)) fail(ErrorKind::domain, "far_field_profile: t must be positive");
  if (!(xi > 0.0)) fail(ErrorKind::domain, "far_field_profile: xi must be positive");
  if (p_max < 0) fail(ErrorKind::domain, "far_field_profile: p_max must be non-negative");
  const int n = initial.size();
  if (n % 2 != 0 || n < 8) fail(ErrorKind::domain, "far_field_profile: input grid must be even");

  const double xt = xi * t;
  const double h = 2.0 * kPi / n;

  // Nodes u_k = -pi + k h on the period centered at the packet, k = 0..n,
  // trapezoid weights; the half grid keeps the even nodes only.
  std::vector<cplx> full(static_cast<std::size_t>(n + 1));
  for (int k = 0; k <= n; ++k) {
    const double u = -kPi + k * h;
    cplx v = initial[(k + n / 2) % n];
    if (options.keep_chirp) v *= std::polar(1.0, u * u / (4.0 * xt));
    const double w = (k == 0 || k == n) ? 0.5 * h : h;
    full[static_cast<std::size_t>(k)] = v * w;
  }

  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * kPi);
  const cplx prefactor = std::polar(1.0 / std::sqrt(2.0 * xt), -0.25 * kPi);

  AngularProfile out(n_grid_out);
  double quad_err = 0.0;
  double edge = 0.0;
  constexpr int kReseed = 256;
  for (int j = 0; j < n_grid_out; ++j) {
    const double phi = 2.0 * kPi * j / n_grid_out;
    cplx total{};
    cplx total_half{};
    for (int p = -p_max; p <= p_max; ++p) {
      const double d = phi - 2.0 * kPi * p;
      const double x = d / (2.0 * xt);
      const cplx step = std::polar(1.0, -x * h);
      cplx rot{};
      cplx f_full{};
      cplx f_half{};
      for (int k = 0; k <= n; ++k) {
        if (k % kReseed == 0) {
          rot = std::polar(1.0, -x * (-kPi + k * h));
        } else {
          rot *= step;
        }
        const cplx term = full[static_cast<std::size_t>(k)] * rot;
        f_full += term;
        if (k % 2 == 0) f_half += 2.0 * term;
      }
      const cplx chirp = std::polar(1.0, d * d / (4.0 * xt));
      const cplx contrib = chirp * f_full * inv_sqrt_2pi;
      total += contrib;
      total_half += chirp * f_half * inv_sqrt_2pi;
      if (p_max > 0 && (p == p_max || p == -p_max)) edge = std::max(edge, std::abs(prefactor * contrib));
    }
    out[j] = prefactor * total;
    quad_err = std::max(quad_err, std::abs(prefactor * (total - total_half)));
  }

  if (diagnostics) {
    diagnostics->quadrature_error = quad_err;
    diagnostics->edge_term = edge;
  }
  if (quad_err > options.tolerance)
    fail(ErrorKind::accuracy, "far_field_profile: quadrature not converged (grid-halving difference " +
                                  std::to_string(quad_err) + ")");
  return out;
}

double identity_check(int m, double phi, double xi_t) {
  if (!(xi_t > 0.0)) fail(ErrorKind::domain, "identity_check: xi t must be positive");
  const cplx lhs = std::polar(1.0, m * phi - xi_t * m * m);

  // Integrate along the steepest-descent ray through the stationary point
  // u0 = phi - 2 xi t m with the convergence factor exp(-eps (u - u0)^2),
  // then extrapolate eps -> 0.
  const double center = phi - 2.0 * xi_t * m;
  const cplx dir = std::polar(1.0, 0.25 * kPi);
  const double span = 12.0 * std::sqrt(4.0 * xi_t);

  const auto regularized = [&](double eps) {
    const auto integrate = [&](int nodes) {
      const GaussRule rule = gauss_legendre(nodes, -span, span);
      cplx acc{};
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const cplx u = center + dir * rule.nodes[i];
        const cplx e = kI * static_cast<double>(m) * u + kI * (phi - u) * (phi - u) / (4.0 * xi_t) -
                       eps * (u - center) * (u - center);
        acc += rule.weights[i] * std::exp(e);
      }
      return acc * dir;
    };
    cplx prev = integrate(32);
    for (int nodes = 64; nodes <= 2048; nodes *= 2) {
      const cplx cur = integrate(nodes);
      if (std::abs(cur - prev) < 1e-14 * std::max(1.0, std::abs(cur))) return cur;
      prev = cur;
    }
    fail(ErrorKind::accuracy, "identity_check: quadrature did not converge");
  };

  const double e1 = 1e-2, e2 = 1e-3, e3 = 1e-4;
  const cplx i1 = regularized(e1);
  const cplx i2 = regularized(e2);
  const cplx i3 = regularized(e3);
  const cplx limit = i1 * (e2 * e3 / ((e1 - e2) * (e1 - e3))) +
                     i2 * (e1 * e3 / ((e2 - e1) * (e2 - e3))) +
                     i3 * (e1 * e2 / ((e3 - e1) * (e3 - e2)));
  const cplx rhs = limit / std::sqrt(cplx(0.0, 4.0 * kPi * xi_t));
  return std::abs(lhs - rhs);
}

int dominant_order(double pulse_area) { return static_cast<int>(std::lround(pulse_area / 2.0)); }

double meeting_time(const KickParams& params) {
  params.validate();
  if (params.pulse_area <= 0.0)
    fail(ErrorKind::domain, "meeting_time: no counterrotating packets without a pulse");
  return kPi / (2.0 * params.xi * params.pulse_area * params.l);
}

double group_velocity(int n, const KickParams& params) { return 4.0 * params.xi * n * params.l; }

double packet_half_width(const KickParams& params, double t) {
  return 2.0 * params.xi * t * std::sqrt(params.n_loc / 2.0);
}

bool dominant_packets_overlap(const KickParams& params, double t) {
  const int n = dominant_order(params.pulse_area);
  if (n == 0) return false;
  const double travel = std::fmod(2.0 * group_velocity(n, params) * t, 2.0 * kPi);
  const double gap = std::min(travel, 2.0 * kPi - travel);
  return gap <= 2.0 * packet_half_width(params, t);
}

double raman_nath_ratio(double xi, double tau, int m_max) {
  return xi * tau * static_cast<double>(m_max) * m_max;
}

}  // namespace ringlattice::angular
