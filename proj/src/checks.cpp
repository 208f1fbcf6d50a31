#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "ringlattice/app.hpp"
#include "ringlattice/bands.hpp"
#include "ringlattice/error.hpp"
#include "ringlattice/quadrature.hpp"

namespace ringlattice::app {

namespace fs = std::filesystem;
using angular::AngularProfile;
using angular::AngularSpectrum;
using angular::cplx;
using angular::kPi;

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

/// Accumulates sub-results of one criterion into a pass flag and a detail line.
class Verdict {
 public:
  void below(const std::string& what, double value, double limit) {
    const bool ok = value < limit;
    add(ok, what + " " + num(value) + (ok ? " < " : " >= ") + num(limit));
  }
  void at_least(const std::string& what, double value, double limit) {
    const bool ok = value >= limit;
    add(ok, what + " " + num(value) + (ok ? " >= " : " < ") + num(limit));
  }
  void require(const std::string& what, bool ok) { add(ok, what + (ok ? " ok" : " FAILED")); }

  bool passed() const noexcept { return passed_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  void add(bool ok, const std::string& text) {
    passed_ = passed_ && ok;
    if (!detail_.empty()) detail_ += "; ";
    detail_ += text;
  }
  bool passed_ = true;
  std::string detail_;
};

double evenness(const AngularProfile& f) {
  const int n = f.size();
  double worst = 0.0;
  for (int j = 0; j < n; ++j) worst = std::max(worst, std::abs(std::norm(f[j]) - std::norm(f[(n - j) % n])));
  return worst;
}

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

struct Context {
  const SimConfig& cfg;
  fs::path out;
  double scale;
  std::shared_ptr<FieldModel> field;  // shared by the field criteria
  std::vector<std::pair<std::string, Schema>>* files;
};

void kick_oracle(Context& c, Verdict& v) {
  const auto kick = c.cfg.kick();
  const AngularSpectrum zeta = angular::apply_kick_bessel(angular::initial_spectrum(kick.n_loc, kick.n_loc), kick);
  int n = 2048;
  while (n < 4 * zeta.m_max()) n *= 2;
  const auto grid = angular::apply_kick_grid(angular::initial_profile(kick.n_loc, n), kick);
  const AngularSpectrum proj = angular::project(grid, zeta.m_max());
  double worst = 0.0;
  for (int m = -zeta.m_max(); m <= zeta.m_max(); ++m) worst = std::max(worst, std::abs(zeta[m] - proj[m]));
  v.below("max|Bessel sum - projected mask|", worst, 1e-8 * c.scale);
}

void peak_structure(Context& c, Verdict& v) {
  const RingSetup ring = ring_setup(c.cfg);
  const int l = ring.kick.l;
  const auto& z = ring.kicked;
  std::vector<int> centers;
  bool near = true;
  for (int n = -3; n <= 3; ++n) {
    int best = 2 * n * l;
    for (int m = 2 * n * l - l + 1; m < 2 * n * l + l; ++m)
      if (std::norm(z.at(m)) > std::norm(z.at(best))) best = m;
    const bool is_max = std::norm(z.at(best)) > std::norm(z.at(best - 1)) && std::norm(z.at(best)) > std::norm(z.at(best + 1));
    near = near && is_max && std::abs(best - 2 * n * l) <= 1;
    centers.push_back(best);
  }
  std::string list;
  bool spaced = true;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    list += (i ? "," : "") + std::to_string(centers[i]);
    if (i) spaced = spaced && centers[i] - centers[i - 1] == 2 * l;
  }
  v.require("local maxima within 1 of m = 2nl, |n| <= 3 at {" + list + "}", near);
  v.require("neighbour spacing " + std::to_string(2 * l), spaced);
}

void unitarity(Context& c, Verdict& v) {
  const RingSetup ring = ring_setup(c.cfg);
  const auto psi = angular::initial_spectrum(ring.kick.n_loc, ring.kick.n_loc);
  v.below("|initial norm - 1|", std::abs(psi.norm_squared() - 1.0), 1e-13 * c.scale);
  double worst = std::abs(ring.kicked.norm_squared() - 1.0);
  for (const char* key : {"fig3_xi_t", "fig4_xi_t", "xi_t"}) {
    const double xt = c.cfg.real(key);
    const auto ev = angular::free_evolve(ring.kicked, ring.kick.xi, xt / ring.kick.xi);
    worst = std::max(worst, std::abs(ev.norm_squared() - 1.0));
    worst = std::max(worst, std::abs(angular::synthesize(ev, c.cfg.integer("n_grid")).norm_squared() - 1.0));
  }
  v.below("|norm - 1| after kick, evolution and synthesis", worst, 1e-10 * c.scale);
}

void far_field(Context& c, Verdict& v) {
  const RingSetup ring = ring_setup(c.cfg);
  for (const char* key : {"fig3_xi_t", "fig4_xi_t"}) {
    const double xt = c.cfg.real(key);
    const AngularProfile modes = ring_profile(c.cfg, ring, xt);
    const AngularProfile far = ring_farfield(c.cfg, xt);
    double d = 0.0;
    for (int j = 0; j < modes.size(); ++j) d = std::max(d, std::abs(modes[j] - far[j]));
    v.below(std::string("L_inf at ") + key, d, 1e-6 * c.scale);
  }
}

void fringe_onset(Context& c, Verdict& v) {
  const RingSetup ring = ring_setup(c.cfg);
  const int l = ring.kick.l;
  const int orders = angular::dominant_order(ring.kick.pulse_area);
  const double period = kPi / (2.0 * orders * l);
  const double cell = 2.0 * kPi / c.cfg.integer("n_grid");
  // fringes: neighbouring maxima of the near-pi window spaced by less than
  // the two-packet period plus one grid cell
  const auto fringe_pairs = [&](const std::vector<int>& maxima) {
    int pairs = 0;
    for (std::size_t i = 1; i < maxima.size(); ++i)
      if ((maxima[i] - maxima[i - 1]) * cell < period + cell) ++pairs;
    return pairs;
  };
  const auto early = local_maxima(ring_profile(c.cfg, ring, c.cfg.real("fig3_xi_t")), kPi, 0.5, 1e-3);
  const auto late = local_maxima(ring_profile(c.cfg, ring, c.cfg.real("fig4_xi_t")), kPi, 0.5, 1e-3);
  v.require("no fringes of period <= " + num(period) + " near pi at fig3_xi_t (" + std::to_string(early.size()) +
                " maxima)",
            fringe_pairs(early) == 0);
  v.at_least("maxima near pi at fig4_xi_t", static_cast<double>(late.size()), 5);
}

void identity(Context& c, Verdict& v) {
  double worst = 0.0;
  for (int m : {0, 5})
    for (double phi : {0.0, 1.0}) worst = std::max(worst, angular::identity_check(m, phi, 1e-2));
  v.below("max Fresnel identity residual", worst, 1e-6 * c.scale);
}

void band_checks(Context& c, Verdict& v) {
  const int l = 2;
  const int s_max = c.cfg.integer("s_max");
  const int n_bands = c.cfg.integer("n_bands");
  const auto free = bands::solve_bands(bands::LatticeSpec{l, 0.0, s_max, n_bands});
  bool counts = true;
  for (int j = 0; j < n_bands; ++j) counts = counts && free.band(j).size() == static_cast<std::size_t>(2 * l);
  v.require("2l states per band", counts);
  v.require("quasimomenta {-2,-1,0,1}", free.quasimomenta() == std::vector<int>{-2, -1, 0, 1});
  double rotor = 0.0;
  for (int q = -l; q < l; ++q) {
    std::vector<double> e;
    for (int s = -s_max; s <= s_max; ++s) e.push_back(double(q + 2 * l * s) * double(q + 2 * l * s));
    std::sort(e.begin(), e.end());
    for (int j = 0; j < n_bands; ++j) rotor = std::max(rotor, std::abs(free.state(q, j).energy - e[static_cast<std::size_t>(j)]));
  }
  v.below("free rotor deviation", rotor, 1e-12 * c.scale);

  const double depth = c.cfg.real("depth") > 0.0 ? c.cfg.real("depth") : 10.0;
  const auto b = bands::solve_bands(bands::LatticeSpec{l, depth, s_max, n_bands});
  const int n = 256 * l;
  const int shift = n / (2 * l);
  double trans = 0.0;
  for (const auto& st : b.states()) {
    const auto prof = st.profile(n);
    const cplx expect = std::polar(1.0, -kPi * st.q / l);
    for (int j = 0; j < n; ++j) trans = std::max(trans, std::abs(prof[(j - shift + n) % n] - expect * prof[j]));
  }
  v.below("translation eigenvalue error", trans, 1e-10 * c.scale);

  const auto wan = bands::wannier_states(b, 0, n);
  double ortho = 0.0;
  for (const auto& a : wan.states)
    for (const auto& d : wan.states) {
      cplx s{};
      const int mm = std::max(a.spectrum.m_max(), d.spectrum.m_max());
      for (int m = -mm; m <= mm; ++m) s += std::conj(a.spectrum.at(m)) * d.spectrum.at(m);
      ortho = std::max(ortho, std::abs(s - (&a == &d ? 1.0 : 0.0)));
    }
  v.below("Wannier overlap error", ortho, 1e-8 * c.scale);
  double back = 0.0;
  for (int q = -l; q < l; ++q) {
    const auto psi = bands::bloch_from_wannier(wan, l, q);
    const auto ref = b.state(q, 0).spectrum();
    for (int m = -ref.m_max(); m <= ref.m_max(); ++m) back = std::max(back, std::abs(psi.at(m) - ref[m]));
  }
  v.below("Bloch from Wannier error", back, 1e-10 * c.scale);
}

void radial_basis(Context& c, Verdict& v) {
  const auto box = c.cfg.box();
  const GaussRule rule = gauss_legendre(1000, 0.0, box.a);
  double worst = 0.0;
  for (int m : {0, 10}) {
    std::vector<std::vector<double>> vals;
    for (int n = 1; n <= 100; ++n) {
      const auto mode = radial::radial_mode(n, m, box);
      std::vector<double> col;
      for (double r : rule.nodes) col.push_back(mode(r));
      vals.push_back(std::move(col));
    }
    for (int i = 0; i < 100; ++i)
      for (int j = i; j < 100; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < rule.nodes.size(); ++k)
          s += rule.weights[k] * rule.nodes[k] * vals[static_cast<std::size_t>(i)][k] * vals[static_cast<std::size_t>(j)][k];
        worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
      }
  }
  v.below("mode overlap error, m in {0,10}, n <= 100", worst, 1e-8 * c.scale);
  const auto state = radial::project_initial(box, c.cfg.integer("radial_m"));
  v.below("projection residual", state.residual, 1e-3 * c.scale);
  const double r0 = radial::mean_radius(state, box, 0.0);
  v.below("|<rho(0)> - rho0|", std::abs(r0 - box.rho0), 5e-4 * box.a * c.scale);
}

void collapse(Context& c, Verdict& v) {
  const Trace tr = radial_trace(c.cfg);
  const auto& s = tr.shape;
  v.require("envelope " + num(s.initial) + " -> " + num(s.collapsed) + " at lambda t " + num(s.t_collapse) + " -> " +
                num(s.revived) + " at " + num(s.t_revival) + ", collapse and revival",
            s.found);
}

void field_slices(Context& c, Verdict& v) {
  c.field = std::make_shared<FieldModel>(field_model(c.cfg));
  const AngularProfile f1 = field_slice(c.cfg, *c.field, c.cfg.real("fig6_lambda_t1"));
  const AngularProfile f2 = field_slice(c.cfg, *c.field, c.cfg.real("fig6_lambda_t2"));
  v.below("near-pi probability over peak at t1", window_peak_ratio(f1, kPi, 0.1), 0.05);
  v.at_least("maxima near pi at t2", static_cast<double>(local_maxima(f2, kPi, 0.5, 1e-3).size()), 5);
  v.below("evenness error", std::max(evenness(f1), evenness(f2)), 1e-10 * c.scale);
}

void ring_vs_field(Context& c, Verdict& v) {
  if (!c.field) c.field = std::make_shared<FieldModel>(field_model(c.cfg));
  const auto& zeta = c.field->zeta;
  const double lambda = c.cfg.real("lambda");
  const double ratio = c.cfg.real("box_radius") / c.cfg.real("slice_rho");
  const double xi = lambda * ratio * ratio;  // 4 lambda on the half-radius ring
  const int n = c.cfg.integer("n_grid");
  for (const char* key : {"fig6_lambda_t1", "fig6_lambda_t2"}) {
    const double lt = c.cfg.real(key);
    const AngularProfile field = field_slice(c.cfg, *c.field, lt);
    const AngularProfile ring = angular::synthesize(angular::free_evolve(zeta, xi, lt / lambda), n);
    const auto a = local_maxima(ring, kPi, 0.1, 1e-3);
    const auto b = local_maxima(field, kPi, 0.1, 1e-3);
    int worst = 0;
    for (int i : a) {
      int best = n;
      for (int j : b) best = std::min(best, std::abs(i - j));
      worst = std::max(worst, best);
    }
    for (int j : b) {
      int best = n;
      for (int i : a) best = std::min(best, std::abs(i - j));
      worst = std::max(worst, best);
    }
    const bool ok = a.size() == b.size() && worst <= 1;
    v.require(std::string(key) + ": " + std::to_string(a.size()) + " ring vs " + std::to_string(b.size()) +
                  " field maxima, worst offset " + (a.empty() && b.empty() ? std::string("0") : std::to_string(worst)) +
                  " cells",
              ok);
  }
}

void determinism(Context& c, Verdict& v) {
  const fs::path first = c.out / "check_data";
  const fs::path second = c.out / "check_data.rerun";
  std::vector<std::string> names;
  for (int pass = 0; pass < 2; ++pass) {
    const fs::path dir = pass == 0 ? first : second;
    for (int fig = 1; fig <= 6; ++fig) {
      const RunResult r = run_figure(fig, c.cfg, dir, false);
      if (pass > 0) continue;
      for (const auto& f : r.files) {
        names.push_back(f.first);
        if (c.files) c.files->emplace_back("check_data/" + f.first, f.second);
      }
    }
  }
  int differ = 0;
  for (const auto& name : names)
    if (read_bytes(first / name) != read_bytes(second / name)) ++differ;
  std::error_code ec;
  fs::remove_all(second, ec);
  v.require(std::to_string(names.size()) + " CSV files regenerated, " + std::to_string(differ) + " differ",
            differ == 0 && !names.empty());
}

struct Criterion {
  int id;
  const char* name;
  double runtime_limit;
  void (*run)(Context&, Verdict&);
};

}  // namespace

std::vector<CheckResult> run_checks(const SimConfig& cfg, const fs::path& out, const CheckCallback& progress,
                                    std::vector<std::pair<std::string, Schema>>* files) {
  cfg.validate();
  prepare_output(out);
  static const Criterion criteria[] = {
      {1, "kick oracle equivalence", 1.0, kick_oracle},
      {2, "diffraction peak structure", 1.0, peak_structure},
      {3, "norm conservation", 0.0, unitarity},
      {4, "far field vs mode sum", 10.0, far_field},
      {5, "fringe onset", 0.0, fringe_onset},
      {6, "Fresnel identity", 5.0, identity},
      {7, "Bloch bands and Wannier states", 0.0, band_checks},
      {8, "radial basis and projection", 0.0, radial_basis},
      {9, "mean radius collapse and revival", 30.0, collapse},
      {10, "field slices on the ring radius", 60.0, field_slices},
      {11, "ring model vs radial field fringes", 0.0, ring_vs_field},
      {12, "deterministic data files", 0.0, determinism},
  };
  Context ctx{cfg, out, cfg.real("tolerance_scale"), nullptr, files};
  std::vector<CheckResult> results;
  for (const auto& crit : criteria) {
    CheckResult r;
    r.id = crit.id;
    r.name = crit.name;
    r.runtime_limit_s = crit.runtime_limit;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      crit.run(ctx, v);
      r.passed = v.passed();
      r.detail = v.detail();
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("error: ") + e.what();
    }
    r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.runtime_limit_s > 0.0 && r.runtime_s >= r.runtime_limit_s) {
      r.passed = false;
      r.detail += "; runtime over limit";
    }
    if (progress) progress(r);
    results.push_back(std::move(r));
  }
  return results;
}

std::string format_check(const CheckResult& r) {
  std::ostringstream o;
  o << (r.passed ? "PASS" : "FAIL") << "  #" << r.id << " " << r.name << ": " << r.detail << " [" << num(r.runtime_s)
    << " s";
  if (r.runtime_limit_s > 0.0) o << ", limit " << num(r.runtime_limit_s) << " s";
  o << "]";
  return o.str();
}

}  // namespace ringlattice::app
