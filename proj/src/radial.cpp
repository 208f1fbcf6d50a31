#include "ringlattice/radial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <thread>

#include "ringlattice/error.hpp"
#include "ringlattice/quadrature.hpp"
#include "ringlattice/specfun.hpp"

namespace ringlattice::radial {

using angular::kPi;

namespace {

constexpr int kStartModes = 32;
constexpr int kModeCap = 4096;
constexpr double kWindow = 10.0;       // half-width of the overlap window in units of L
constexpr double kGuardBand = 12.0;    // extra bandwidth of the Gaussian, in units of 1/L
constexpr double kOverlapCheck = 1e-10;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double gaussian_norm(const BoxParams& box) {
  const double l = box.width;
  const double r0 = box.rho0;
  const double integral =
      0.5 * l * l * (std::exp(-r0 * r0 / (l * l)) - std::exp(-(box.a - r0) * (box.a - r0) / (l * l))) +
      r0 * l * 0.5 * std::sqrt(kPi) * (std::erf((box.a - r0) / l) + std::erf(r0 / l));
  return 1.0 / std::sqrt(integral);
}

// Overlap of the initial Gaussian with one mode. Inside the box the integrand
// decays to e^-50 at the window edges and is band limited to alpha/a + 12/L,
// so the trapezoid rule converges spectrally. `refine` multiplies the node
// count for the self-check.
double overlap(const RadialMode& mode, const BoxParams& box, double gnorm, int refine) {
  const double half = kWindow * box.width;
  const double k = mode.alpha / box.a;
  double lo = box.rho0 - half;
  double hi = box.rho0 + half;
  const auto gauss = [&](double rho) {
    const double u = (rho - box.rho0) / box.width;
    return gnorm * std::exp(-0.5 * u * u);
  };

  if (lo > 0.0 && hi < box.a) {
    double h = 2.0 * kPi / (k + kGuardBand / box.width);
    h = std::min(h, 3.0 / std::max(k, 1e-300));
    int cells = static_cast<int>(std::ceil((hi - lo) / h)) * refine;
    h = (hi - lo) / cells;
    std::vector<double> jm(static_cast<std::size_t>(cells) + 1);
    specfun::bessel_j_grid(mode.m, k * lo, k * h, jm);
    double sum = 0.0;
    for (int i = 0; i <= cells; ++i) {
      const double rho = lo + h * i;
      const double w = (i == 0 || i == cells) ? 0.5 : 1.0;
      sum += w * gauss(rho) * jm[static_cast<std::size_t>(i)] * rho;
    }
    return mode.norm * h * sum;
  }

  // The window meets the axis or the wall: composite Gauss-Legendre panels
  // no longer than half a local wavelength or L.
  lo = std::max(lo, 0.0);
  hi = std::min(hi, box.a);
  const double panel = std::min(kPi / std::max(k, 1e-300), box.width);
  const int panels = static_cast<int>(std::ceil((hi - lo) / panel)) * refine;
  const auto rule = gauss_legendre(10, 0.0, 1.0);
  double sum = 0.0;
  const double len = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double rho = lo + len * (p + rule.nodes[i]);
      sum += rule.weights[i] * len * gauss(rho) * mode(rho) * rho;
    }
  }
  return sum;
}

void add_modes(RadialState& st, specfun::BesselZeroTable& zeros, const BoxParams& box, double gnorm,
               int count) {
  zeros.extend(count);
  const int mabs = zeros.order();
  for (int n = static_cast<int>(st.modes.size()) + 1; n <= count; ++n) {
    RadialMode mode;
    mode.n = n;
    mode.m = mabs;
    mode.alpha = zeros(n);
    mode.energy = box.lambda * mode.alpha * mode.alpha;
    mode.norm = std::sqrt(2.0) / (box.a * std::abs(specfun::bessel_j_pair(mabs, mode.alpha).second));
    mode.a = box.a;
    st.coeffs.push_back(overlap(mode, box, gnorm, 1));
    st.modes.push_back(mode);
  }
  double captured = 0.0;
  for (double c : st.coeffs) captured += c * c;
  st.residual = 1.0 - captured;
}

}  // namespace

void BoxParams::validate() const {
  if (!(a > 0.0) || !std::isfinite(a)) fail(ErrorKind::domain, "box radius a must be positive");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) fail(ErrorKind::domain, "lambda must be positive");
  if (!(rho0 > 0.0 && rho0 < a)) fail(ErrorKind::domain, "rho0 must lie strictly inside (0, a)");
  if (!(width > 0.0) || !std::isfinite(width)) fail(ErrorKind::domain, "packet width L must be positive");
  if (n_max < 0 || n_max > kModeCap) fail(ErrorKind::domain, "n_max must be in [0, 4096]");
  if (!(residual_target > 0.0 && residual_target < 1.0))
    fail(ErrorKind::domain, "residual_target must lie in (0, 1)");
}

std::vector<std::string> BoxParams::warnings() const {
  std::vector<std::string> out;
  if (width > a / 10.0) out.push_back("packet width L = " + fmt(width) + " is not small compared with a / 10");
  return out;
}

double RadialMode::operator()(double rho) const {
  return norm * specfun::bessel_j(m, alpha * rho / a);
}

RadialMode radial_mode(int n, int m, const BoxParams& box) {
  box.validate();
  if (n < 1) fail(ErrorKind::domain, "radial_mode: n must be >= 1");
  const int mabs = std::abs(m);
  if (mabs > specfun::kMaxOrder) fail(ErrorKind::domain, "radial_mode: |m| too large");
  RadialMode mode;
  mode.n = n;
  mode.m = mabs;
  mode.alpha = specfun::bessel_zero(mabs, n);
  mode.energy = box.lambda * mode.alpha * mode.alpha;
  mode.norm = std::sqrt(2.0) / (box.a * std::abs(specfun::bessel_j_pair(mabs, mode.alpha).second));
  mode.a = box.a;
  return mode;
}

double RadialState::norm_squared() const {
  double s = 0.0;
  for (double c : coeffs) s += c * c;
  return s;
}

double RadialState::energy() const {
  double s = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) s += coeffs[i] * coeffs[i] * modes[i].energy;
  return s;
}

double initial_wavefunction(const BoxParams& box, double rho) {
  if (rho < 0.0 || rho > box.a) return 0.0;
  const double u = (rho - box.rho0) / box.width;
  return gaussian_norm(box) * std::exp(-0.5 * u * u);
}

RadialState project_initial(const BoxParams& box, int m) {
  box.validate();
  const int mabs = std::abs(m);
  if (mabs > specfun::kMaxOrder) fail(ErrorKind::domain, "project_initial: |m| too large");
  RadialState st;
  st.m = m;
  const double gnorm = gaussian_norm(box);
  specfun::BesselZeroTable zeros(mabs, 1);

  if (box.n_max > 0) {
    add_modes(st, zeros, box, gnorm, box.n_max);
  } else {
    int count = kStartModes;
    add_modes(st, zeros, box, gnorm, count);
    while (st.residual >= box.residual_target && count < kModeCap) {
      count *= 2;
      add_modes(st, zeros, box, gnorm, count);
    }
  }
  if (st.residual >= box.residual_target) {
    st.warnings.push_back("m = " + std::to_string(m) + ": completeness residual " + fmt(st.residual) +
                          " with n_max = " + std::to_string(st.modes.size()) + " exceeds " +
                          fmt(box.residual_target));
  }
  const double last = st.coeffs.back();
  const double check = overlap(st.modes.back(), box, gnorm, 2);
  if (std::abs(check - last) > kOverlapCheck) {
    st.warnings.push_back("m = " + std::to_string(m) + ": overlap quadrature changed by " +
                          fmt(std::abs(check - last)) + " under refinement");
  }
  return st;
}

std::vector<cplx> evolve_radial(const RadialState& state, const BoxParams& box, double t,
                                std::span<const double> rho) {
  if (!(t >= 0.0)) fail(ErrorKind::domain, "evolve_radial: t must be >= 0");
  std::vector<cplx> out(rho.size());
  for (std::size_t n = 0; n < state.modes.size(); ++n) {
    const auto& mode = state.modes[n];
    const cplx amp = state.coeffs[n] * std::polar(1.0, -mode.energy * t);
    for (std::size_t j = 0; j < rho.size(); ++j) {
      if (rho[j] < 0.0 || rho[j] > box.a) continue;
      out[j] += amp * mode(rho[j]);
    }
  }
  return out;
}

MeanRadius::MeanRadius(const RadialState& state, const BoxParams& box)
    : coeffs_(state.coeffs), weight_(state.norm_squared()) {
  const std::size_t n = state.modes.size();
  for (const auto& mode : state.modes) energies_.push_back(mode.energy);
  if (!(weight_ > 0.0)) fail(ErrorKind::domain, "mean_radius: state carries no weight");

  const auto build = [&](int nodes) {
    const auto rule = gauss_legendre(nodes, 0.0, box.a);
    std::vector<double> values(n * rule.nodes.size());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) values[i * rule.nodes.size() + k] = state.modes[i](rule.nodes[k]);
    }
    std::vector<double> mat(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
          const double r = rule.nodes[k];
          s += rule.weights[k] * r * r * values[i * rule.nodes.size() + k] * values[j * rule.nodes.size() + k];
        }
        mat[i * n + j] = mat[j * n + i] = s;
      }
    }
    return mat;
  };
  const int nodes = 4 * static_cast<int>(n) + 64;
  matrix_ = build(nodes);
  const auto fine = build(2 * nodes);
  for (std::size_t i = 0; i < matrix_.size(); ++i)
    quadrature_error_ = std::max(quadrature_error_, std::abs(fine[i] - matrix_[i]));
}

double MeanRadius::operator()(double t) const {
  const std::size_t n = coeffs_.size();
  std::vector<cplx> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = coeffs_[i] * std::polar(1.0, -energies_[i] * t);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s += matrix_[i * n + i] * std::norm(v[i]);
    cplx row{};
    for (std::size_t j = i + 1; j < n; ++j) row += matrix_[i * n + j] * v[j];
    s += 2.0 * std::real(std::conj(v[i]) * row);
  }
  return s / weight_;
}

double mean_radius(const RadialState& state, const BoxParams& box, double t) {
  return MeanRadius(state, box)(t);
}

RadialSet::RadialSet(const BoxParams& box, int m_abs_max) : box_(box) {
  box.validate();
  if (m_abs_max < 0) fail(ErrorKind::domain, "RadialSet: m_abs_max must be >= 0");
  states_.resize(static_cast<std::size_t>(m_abs_max) + 1);
  const unsigned workers = std::max(1u, std::min(std::thread::hardware_concurrency(),
                                                 static_cast<unsigned>(m_abs_max + 1)));
  std::vector<std::exception_ptr> errors(workers);
  const auto work = [&](unsigned w) {
    try {
      for (int m = static_cast<int>(w); m <= m_abs_max; m += static_cast<int>(workers))
        states_[static_cast<std::size_t>(m)] = project_initial(box_, m);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

const RadialState& RadialSet::state(int m) const {
  const int mabs = std::abs(m);
  if (mabs > m_abs_max())
    fail(ErrorKind::truncation, "no radial state for m = " + std::to_string(m));
  return states_[static_cast<std::size_t>(mabs)];
}

double RadialSet::worst_residual() const {
  double r = 0.0;
  for (const auto& st : states_) r = std::max(r, st.residual);
  return r;
}

std::vector<std::string> RadialSet::warnings() const {
  std::vector<std::string> out = box_.warnings();
  for (const auto& st : states_) out.insert(out.end(), st.warnings.begin(), st.warnings.end());
  return out;
}

std::vector<double> even_trace_envelope(std::span<const double> trace) {
  const int k = static_cast<int>(trace.size()) - 1;
  if (k < 2) fail(ErrorKind::domain, "even_trace_envelope: need at least 3 samples");
  const int n = 2 * k;
  std::vector<double> e(static_cast<std::size_t>(n));
  for (int j = 0; j <= k; ++j) e[static_cast<std::size_t>(j)] = trace[static_cast<std::size_t>(j)];
  for (int j = 1; j < k; ++j) e[static_cast<std::size_t>(n - j)] = trace[static_cast<std::size_t>(j)];
  double mean = 0.0;
  for (double v : e) mean += v;
  mean /= n;
  for (double& v : e) v -= mean;

  std::vector<double> cs(static_cast<std::size_t>(n));
  std::vector<double> sn(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    cs[static_cast<std::size_t>(j)] = std::cos(2.0 * kPi * j / n);
    sn[static_cast<std::size_t>(j)] = std::sin(2.0 * kPi * j / n);
  }
  // Even data has a real, even spectrum.
  std::vector<double> spec(static_cast<std::size_t>(k) + 1);
  for (int f = 1; f <= k; ++f) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += e[static_cast<std::size_t>(j)] * cs[static_cast<std::size_t>((static_cast<long>(f) * j) % n)];
    spec[static_cast<std::size_t>(f)] = s;
  }
  std::vector<double> env(static_cast<std::size_t>(k) + 1);
  for (int j = 0; j <= k; ++j) {
    double re = 0.0;
    double im = 0.0;
    for (int f = 1; f <= k; ++f) {
      const double w = (f == k ? 1.0 : 2.0) * spec[static_cast<std::size_t>(f)];
      const auto idx = static_cast<std::size_t>((static_cast<long>(f) * j) % n);
      re += w * cs[idx];
      im += w * sn[idx];
    }
    env[static_cast<std::size_t>(j)] = std::hypot(re, im) / n;
  }
  return env;
}

CollapseRevival collapse_revival(std::span<const double> trace, double dt) {
  const auto env = even_trace_envelope(trace);
  CollapseRevival out;
  out.initial = env[0];
  double low = env[0];
  std::size_t at_low = 0;
  std::size_t best_low = 0;
  std::size_t best_high = 0;
  double best_gain = -1.0;
  for (std::size_t i = 1; i < env.size(); ++i) {
    if (env[i] < low) {
      low = env[i];
      at_low = i;
    }
    const bool decayed = low <= 0.5 * out.initial;
    if (decayed && env[i] - low >= 0.5 * (out.initial - low)) {
      out.found = true;
      best_low = at_low;
      best_high = i;
      // climb to the local top of this revival
      while (best_high + 1 < env.size() && env[best_high + 1] >= env[best_high]) ++best_high;
      break;
    }
    if (env[i] - low > best_gain) {
      best_gain = env[i] - low;
      best_low = at_low;
      best_high = i;
    }
  }
  out.collapsed = env[best_low];
  out.t_collapse = dt * static_cast<double>(best_low);
  out.revived = env[best_high];
  out.t_revival = dt * static_cast<double>(best_high);
  return out;
}

int populated_m_max(const angular::AngularSpectrum& zeta, double threshold) {
  int top = 0;
  for (int m = -zeta.m_max(); m <= zeta.m_max(); ++m) {
    if (std::abs(zeta[m]) > threshold) top = std::max(top, std::abs(m));
  }
  return top;
}

angular::AngularProfile assemble_field(const angular::AngularSpectrum& zeta, const RadialSet& states,
                                       double t, double rho, int n_grid) {
  const int top = populated_m_max(zeta);
  if (top > states.m_abs_max()) {
    fail(ErrorKind::truncation, "assemble_field: populated m = " + std::to_string(top) +
                                    " has no radial state (set covers |m| <= " +
                                    std::to_string(states.m_abs_max()) + ")");
  }
  const double r[1] = {rho};
  std::vector<cplx> radial(static_cast<std::size_t>(top) + 1);
  for (int m = 0; m <= top; ++m)
    radial[static_cast<std::size_t>(m)] = evolve_radial(states.state(m), states.box(), t, r)[0];

  angular::AngularSpectrum field(top);
  for (int m = -top; m <= top; ++m) {
    if (std::abs(zeta[m]) > 1e-10) field[m] = zeta[m] * radial[static_cast<std::size_t>(std::abs(m))];
  }
  return angular::synthesize(field, n_grid);
}

}  // namespace ringlattice::radial
