#include "ringlattice/app.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>

#include "ringlattice/bands.hpp"
#include "ringlattice/error.hpp"

#ifndef RINGLATTICE_VERSION
#define RINGLATTICE_VERSION "0.0.0"
#endif

namespace ringlattice::app {

namespace fs = std::filesystem;
using angular::AngularProfile;
using angular::AngularSpectrum;
using angular::kPi;

namespace {

Series spectrum_series(const std::string& label, const AngularSpectrum& s) {
  Series out{label, {}, {}};
  for (int m = -s.m_max(); m <= s.m_max(); ++m) {
    out.x.push_back(m);
    out.y.push_back(std::norm(s[m]));
  }
  return out;
}

Series profile_series(const std::string& label, const AngularProfile& p) {
  Series out{label, {}, {}};
  for (int j = 0; j < p.size(); ++j) {
    out.x.push_back(p.phi(j));
    out.y.push_back(std::norm(p[j]));
  }
  return out;
}

class Writer {
 public:
  Writer(RunResult& run, const fs::path& out, bool svg) : run_(run), out_(out), svg_(svg) {}

  void data(const std::string& name, const CsvBuilder& csv) {
    write_atomic(out_ / name, csv.text());
    run_.files.emplace_back(name, csv.schema());
  }
  template <class Make>
  void plot(const std::string& name, Make make) {
    if (!svg_) return;
    write_atomic(out_ / name, make());
    run_.plots.push_back(name);
  }

 private:
  RunResult& run_;
  fs::path out_;
  bool svg_;
};

double linf(const AngularProfile& a, const AngularProfile& b) {
  double d = 0.0;
  for (int j = 0; j < a.size(); ++j) d = std::max(d, std::abs(a[j] - b[j]));
  return d;
}

std::string fig_tag(double x) { return canonical_real(x); }

void append(std::vector<std::string>& to, const std::vector<std::string>& from) {
  to.insert(to.end(), from.begin(), from.end());
}

// ---- figures ----

void figure1(const SimConfig& cfg, RunResult& run, Writer& w) {
  const int n = cfg.integer("fig1_pixels");
  json wells = json::object();
  for (int l : {2, 4}) {
    const auto map = bands::potential_grid_xy(l, n, cfg.real("fig1_rho_inner"), cfg.real("fig1_rho_outer"));
    CsvBuilder csv(Schema::potential_map);
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) csv.row({map.coord(ix), map.coord(iy), map.at(ix, iy)});
    const std::string stem = "fig1_l" + std::to_string(l);
    w.data(stem + ".csv", csv);
    w.plot(stem + ".svg", [&] { return svg_heatmap("lattice potential, l = " + std::to_string(l), n, map.values); });
    wells[std::to_string(l)] = bands::count_wells(l, 4096);
  }
  run.summary["wells_per_helicity"] = wells;
}

void figure2(const SimConfig& cfg, RunResult& run, Writer& w) {
  const RingSetup ring = ring_setup(cfg);
  w.data("fig2_initial.csv", spectrum_csv(ring.initial));
  w.data("fig2_kicked.csv", spectrum_csv(ring.kicked));
  w.plot("fig2.svg", [&] {
    return svg_lines("momentum distribution", "m", "probability",
                     {spectrum_series("before the pulse", ring.initial), spectrum_series("after the pulse", ring.kicked)});
  });
  const int l = ring.kick.l;
  const int orders = angular::dominant_order(ring.kick.pulse_area);
  json peaks = json::array();
  for (int n = -orders; n <= orders; ++n) {
    int best = 2 * n * l;
    for (int m = 2 * n * l - l + 1; m < 2 * n * l + l; ++m)
      if (std::norm(ring.kicked.at(m)) > std::norm(ring.kicked.at(best))) best = m;
    peaks.push_back(best);
  }
  run.summary["peak_momenta"] = peaks;
  run.summary["norm_after_pulse"] = ring.kicked.norm_squared();
}

void figure_ring(int which, const SimConfig& cfg, RunResult& run, Writer& w) {
  const double xi_t = cfg.real(which == 3 ? "fig3_xi_t" : "fig4_xi_t");
  const RingSetup ring = ring_setup(cfg);
  const AngularProfile modes = ring_profile(cfg, ring, xi_t);
  angular::FarFieldDiagnostics diag;
  const AngularProfile far = ring_farfield(cfg, xi_t, &diag);
  const std::string stem = "fig" + std::to_string(which);
  w.data(stem + "_modesum.csv", profile_csv(modes));
  w.data(stem + "_farfield.csv", profile_csv(far));
  w.plot(stem + ".svg", [&] {
    return svg_lines("ring probability at xi t = " + fig_tag(xi_t), "phi", "probability",
                     {profile_series("mode sum", modes), profile_series("period-summed propagator", far)});
  });
  run.summary["xi_t"] = xi_t;
  run.summary["route_difference"] = linf(modes, far);
  run.summary["farfield_quadrature_error"] = diag.quadrature_error;
  run.summary["maxima_near_pi"] = local_maxima(modes, kPi, 0.5, 1e-3).size();
  run.summary["norm"] = modes.norm_squared();
}

void figure5(const SimConfig& cfg, RunResult& run, Writer& w) {
  const Trace tr = radial_trace(cfg);
  CsvBuilder csv(Schema::radial_trace);
  for (std::size_t k = 0; k < tr.lambda_t.size(); ++k) csv.row({tr.lambda_t[k], tr.mean_rho[k]});
  w.data("fig5_trace.csv", csv);
  w.plot("fig5.svg", [&] {
    return svg_lines("mean radius, m = " + std::to_string(tr.state.m), "lambda t", "<rho> / a",
                     {Series{"<rho>", tr.lambda_t, tr.mean_rho}});
  });
  run.summary["m"] = tr.state.m;
  run.summary["modes"] = tr.state.modes.size();
  run.summary["projection_residual"] = tr.state.residual;
  run.summary["envelope_initial"] = tr.shape.initial;
  run.summary["envelope_collapsed"] = tr.shape.collapsed;
  run.summary["lambda_t_collapse"] = tr.shape.t_collapse;
  run.summary["envelope_revived"] = tr.shape.revived;
  run.summary["lambda_t_revival"] = tr.shape.t_revival;
  run.summary["collapse_and_revival"] = tr.shape.found;
  append(run.warnings, tr.state.warnings);
}

void figure6(const SimConfig& cfg, RunResult& run, Writer& w) {
  const FieldModel model = field_model(cfg);
  const double t1 = cfg.real("fig6_lambda_t1");
  const double t2 = cfg.real("fig6_lambda_t2");
  const AngularProfile f1 = field_slice(cfg, model, t1);
  const AngularProfile f2 = field_slice(cfg, model, t2);
  w.data("fig6_t1.csv", slice_csv(f1));
  w.data("fig6_t2.csv", slice_csv(f2));
  w.plot("fig6.svg", [&] {
    return svg_lines("field on the ring radius", "phi", "probability density",
                     {profile_series("lambda t = " + fig_tag(t1), f1), profile_series("lambda t = " + fig_tag(t2), f2)});
  });
  run.summary["populated_m_max"] = model.states->m_abs_max();
  run.summary["worst_projection_residual"] = model.states->worst_residual();
  run.summary["near_pi_ratio_t1"] = window_peak_ratio(f1, kPi, 0.1);
  run.summary["maxima_near_pi_t2"] = local_maxima(f2, kPi, 0.5, 1e-3).size();
  append(run.warnings, model.states->warnings());
}

// ---- stages ----

bool has_input(const SimConfig& cfg) { return !cfg.text("input").empty(); }

AngularSpectrum input_spectrum(const SimConfig& cfg, const AngularSpectrum& fallback) {
  if (!has_input(cfg)) return fallback;
  return spectrum_from_table(read_csv(cfg.text("input"), Schema::spectrum));
}

void stage_kick(const SimConfig& cfg, RunResult& run, Writer& w) {
  const auto kick = cfg.kick();
  const AngularSpectrum in = input_spectrum(cfg, angular::initial_spectrum(kick.n_loc, kick.n_loc));
  const AngularSpectrum out = angular::apply_kick_bessel(in, kick, cfg.integer("m_max"));
  w.data("kick.csv", spectrum_csv(out));
  w.plot("kick.svg", [&] {
    return svg_lines("kicked spectrum", "m", "probability", {spectrum_series("after the pulse", out)});
  });
  run.summary["norm_in"] = in.norm_squared();
  run.summary["norm_out"] = out.norm_squared();
}

void stage_evolve(const SimConfig& cfg, RunResult& run, Writer& w) {
  const double xi = cfg.real("xi");
  const double xi_t = cfg.real("xi_t");
  const AngularSpectrum in = has_input(cfg) ? input_spectrum(cfg, AngularSpectrum(0)) : ring_setup(cfg).kicked;
  const AngularSpectrum out = angular::free_evolve(in, xi, xi_t / xi);
  const AngularProfile prof = angular::synthesize(out, cfg.integer("n_grid"));
  w.data("evolve.csv", spectrum_csv(out));
  w.data("evolve_profile.csv", profile_csv(prof));
  w.plot("evolve.svg", [&] {
    return svg_lines("ring probability at xi t = " + fig_tag(xi_t), "phi", "probability", {profile_series("mode sum", prof)});
  });
  run.summary["xi_t"] = xi_t;
  run.summary["norm_out"] = out.norm_squared();
}

void stage_farfield(const SimConfig& cfg, RunResult& run, Writer& w) {
  const double xi = cfg.real("xi");
  const double xi_t = cfg.real("xi_t");
  angular::FarFieldDiagnostics diag;
  AngularProfile far(2);
  if (!has_input(cfg)) {
    far = ring_farfield(cfg, xi_t, &diag);
  } else {
    // a profile is used as given; a spectrum is first sampled on the far-field grid
    const fs::path path = cfg.text("input");
    std::ifstream probe(path);
    std::string header;
    std::getline(probe, header);
    const AngularProfile initial = header == header_line(Schema::spectrum)
        ? angular::synthesize(spectrum_from_table(read_csv(path, Schema::spectrum)), cfg.integer("farfield_grid"))
        : profile_from_table(read_csv(path, Schema::profile));
    far = angular::far_field_profile(initial, xi, xi_t / xi, cfg.integer("p_max"), cfg.integer("n_grid"),
                                     {true, cfg.real("farfield_tolerance")}, &diag);
  }
  w.data("farfield.csv", profile_csv(far));
  w.plot("farfield.svg", [&] {
    return svg_lines("ring probability at xi t = " + fig_tag(xi_t), "phi", "probability",
                     {profile_series("period-summed propagator", far)});
  });
  run.summary["xi_t"] = xi_t;
  run.summary["quadrature_error"] = diag.quadrature_error;
  run.summary["edge_term"] = diag.edge_term;
}

void stage_bands(const SimConfig& cfg, RunResult& run, Writer& w) {
  const auto b = bands::solve_bands(cfg.lattice());
  CsvBuilder csv(Schema::bands);
  for (int q : b.quasimomenta())
    for (int j = 0; j < b.spec().n_bands; ++j) csv.row({double(q), double(j), b.state(q, j).energy});
  w.data("bands.csv", csv);
  const auto wan = bands::wannier_states(b, cfg.integer("wannier_band"), cfg.integer("n_grid"));
  const auto& home = wan.states[static_cast<std::size_t>(b.spec().l)];  // site 0
  w.data("wannier.csv", profile_csv(home.profile));
  w.plot("bands.svg", [&] {
    std::vector<Series> s;
    for (int j = 0; j < b.spec().n_bands; ++j) {
      Series band{"band " + std::to_string(j), {}, {}};
      for (int q : b.quasimomenta()) {
        band.x.push_back(q);
        band.y.push_back(b.state(q, j).energy);
      }
      s.push_back(band);
    }
    return svg_lines("Bloch bands", "q", "energy / hbar xi", s);
  });
  json lowest = json::object();
  for (int q : b.quasimomenta()) lowest[std::to_string(q)] = b.state(q, 0).energy;
  run.summary["lowest_band"] = lowest;
  run.summary["wannier_site"] = home.site;
  append(run.warnings, b.warnings());
  append(run.warnings, wan.warnings);
}

void stage_radial(const SimConfig& cfg, RunResult& run, Writer& w) { figure5(cfg, run, w); }

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

const char* library_version() { return RINGLATTICE_VERSION; }

RingSetup ring_setup(const SimConfig& cfg) {
  const auto kick = cfg.kick();
  const AngularSpectrum kicked =
      angular::apply_kick_bessel(angular::initial_spectrum(kick.n_loc, kick.n_loc), kick, cfg.integer("m_max"));
  return RingSetup{kick, angular::initial_spectrum(kick.n_loc, kicked.m_max()), kicked};
}

AngularProfile ring_profile(const SimConfig& cfg, const RingSetup& ring, double xi_t) {
  return angular::synthesize(angular::free_evolve(ring.kicked, ring.kick.xi, xi_t / ring.kick.xi),
                             cfg.integer("n_grid"));
}

AngularProfile ring_farfield(const SimConfig& cfg, double xi_t, angular::FarFieldDiagnostics* diagnostics) {
  const auto kick = cfg.kick();
  const AngularProfile initial =
      angular::apply_kick_grid(angular::initial_profile(kick.n_loc, cfg.integer("farfield_grid")), kick);
  return angular::far_field_profile(initial, kick.xi, xi_t / kick.xi, cfg.integer("p_max"), cfg.integer("n_grid"),
                                    {true, cfg.real("farfield_tolerance")}, diagnostics);
}

Trace radial_trace(const SimConfig& cfg) {
  const auto box = cfg.box();
  Trace tr;
  tr.state = radial::project_initial(box, cfg.integer("radial_m"));
  const radial::MeanRadius mean(tr.state, box);
  tr.quadrature_error = mean.quadrature_error();
  const double step = cfg.real("trace_step");
  const auto samples = static_cast<long>(std::lround(cfg.real("trace_lambda_t") / step));
  for (long k = 0; k <= samples; ++k) {
    const double lt = static_cast<double>(k) * step;
    tr.lambda_t.push_back(lt);
    tr.mean_rho.push_back(mean(lt / box.lambda));
  }
  tr.shape = radial::collapse_revival(tr.mean_rho, step);
  return tr;
}

FieldModel field_model(const SimConfig& cfg) {
  AngularSpectrum zeta = ring_setup(cfg).kicked;
  auto states = std::make_shared<const radial::RadialSet>(cfg.box(), radial::populated_m_max(zeta));
  return FieldModel{std::move(zeta), std::move(states)};
}

AngularProfile field_slice(const SimConfig& cfg, const FieldModel& model, double lambda_t) {
  return radial::assemble_field(model.zeta, *model.states, lambda_t / cfg.real("lambda"), cfg.real("slice_rho"),
                                cfg.integer("n_grid"));
}

std::vector<int> local_maxima(const AngularProfile& f, double center, double half_width, double floor) {
  const int n = f.size();
  double peak = 0.0;
  for (int j = 0; j < n; ++j) peak = std::max(peak, std::norm(f[j]));
  std::vector<int> out;
  for (int j = 0; j < n; ++j) {
    if (std::abs(std::remainder(f.phi(j) - center, 2.0 * kPi)) > half_width) continue;
    const double p = std::norm(f[j]);
    if (p > std::norm(f[(j + n - 1) % n]) && p >= std::norm(f[(j + 1) % n]) && p > floor * peak) out.push_back(j);
  }
  return out;
}

double window_peak_ratio(const AngularProfile& f, double center, double half_width) {
  double peak = 0.0, near = 0.0;
  for (int j = 0; j < f.size(); ++j) {
    const double p = std::norm(f[j]);
    peak = std::max(peak, p);
    if (std::abs(std::remainder(f.phi(j) - center, 2.0 * kPi)) <= half_width) near = std::max(near, p);
  }
  return peak > 0.0 ? near / peak : 0.0;
}

void prepare_output(const fs::path& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (!fs::is_directory(out)) fail(ErrorKind::io, "output directory '" + out.string() + "' cannot be created");
  const fs::path probe = out / ".write_probe";
  {
    std::ofstream f(probe);
    if (!f) fail(ErrorKind::io, "output directory '" + out.string() + "' is not writable");
  }
  fs::remove(probe, ec);
}

RunResult run_figure(int which, const SimConfig& cfg, const fs::path& out, bool svg) {
  if (which < 1 || which > 6) fail(ErrorKind::config, "figure must be 1..6, got " + std::to_string(which));
  cfg.validate();
  prepare_output(out);
  RunResult run;
  run.command = "fig" + std::to_string(which);
  Writer w(run, out, svg);
  switch (which) {
    case 1: figure1(cfg, run, w); break;
    case 2: figure2(cfg, run, w); break;
    case 3:
    case 4: figure_ring(which, cfg, run, w); break;
    case 5: figure5(cfg, run, w); break;
    default: figure6(cfg, run, w); break;
  }
  return run;
}

RunResult run_stage(const std::string& stage, const SimConfig& cfg, const fs::path& out, bool svg) {
  using Fn = void (*)(const SimConfig&, RunResult&, Writer&);
  static const std::vector<std::pair<std::string, Fn>> stages = {
      {"kick", stage_kick}, {"evolve", stage_evolve}, {"farfield", stage_farfield},
      {"bands", stage_bands}, {"radial", stage_radial}};
  Fn fn = nullptr;
  for (const auto& [name, f] : stages)
    if (name == stage) fn = f;
  if (!fn) fail(ErrorKind::config, "unknown stage '" + stage + "'; expected kick, evolve, farfield, bands or radial");
  cfg.validate();
  if ((stage == "bands" || stage == "radial") && has_input(cfg))
    fail(ErrorKind::config, "stage '" + stage + "' takes no input file");
  prepare_output(out);
  RunResult run;
  run.command = "run_" + stage;
  Writer w(run, out, svg);
  fn(cfg, run, w);
  return run;
}

json config_json(const SimConfig& cfg) {
  json j = json::object();
  for (const auto& k : config_keys()) {
    const std::string& v = cfg.text(k.name);
    if (k.kind == KeyKind::integer) j[k.name] = cfg.integer(k.name);
    else if (k.kind == KeyKind::real) j[k.name] = cfg.real(k.name);
    else j[k.name] = v;
  }
  return j;
}

json manifest(const RunResult& run, const SimConfig& cfg, double wall_time_s, const std::vector<CheckResult>* checks) {
  json m = json::object();
  m["command"] = run.command;
  m["library_version"] = library_version();
  m["config"] = config_json(cfg);
  json units = json::object();
  for (const auto& k : config_keys()) units[k.name] = k.unit;
  m["config_units"] = units;
  json files = json::array();
  for (const auto& [name, schema] : run.files) {
    const auto& info = schema_info(schema);
    files.push_back({{"file", name},
                     {"schema", info.name},
                     {"schema_version", info.version},
                     {"columns", info.columns},
                     {"units", info.units}});
  }
  m["outputs"] = files;
  m["plots"] = run.plots;
  m["summary"] = run.summary;
  m["warnings"] = run.warnings;
  if (checks) {
    json list = json::array();
    int failed = 0;
    for (const auto& c : *checks) {
      failed += c.passed ? 0 : 1;
      json e = {{"id", c.id}, {"name", c.name}, {"passed", c.passed}, {"detail", c.detail}, {"runtime_s", c.runtime_s}};
      if (c.runtime_limit_s > 0.0) e["runtime_limit_s"] = c.runtime_limit_s;
      list.push_back(e);
    }
    m["checks"] = list;
    m["checks_failed"] = failed;
    m["checks_passed"] = failed == 0;
  }
  m["finished_utc"] = utc_now();
  m["wall_time_s"] = wall_time_s;
  return m;
}

fs::path write_manifest(const fs::path& out, const json& m) {
  const fs::path path = out / ("manifest_" + m["command"].get<std::string>() + ".json");
  write_atomic(path, m.dump(2) + "\n");
  return path;
}

}  // namespace ringlattice::app
