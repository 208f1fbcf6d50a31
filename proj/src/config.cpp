#include "ringlattice/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ringlattice/error.hpp"

namespace ringlattice::app {

namespace {

const KeySpec* find_key(const std::string& name) {
  for (const auto& k : config_keys())
    if (k.name == name) return &k;
  return nullptr;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string canonical(const KeySpec& key, const std::string& raw) {
  const std::string v = trim(raw);
  const bool plus = key.kind != KeyKind::text && v.size() > 1 && v[0] == '+' && v[1] != '-';
  const char* first = v.data() + (plus ? 1 : 0);
  const char* last = v.data() + v.size();
  if (key.kind == KeyKind::integer) {
    long long x = 0;
    auto [p, ec] = std::from_chars(first, last, x);
    if (ec != std::errc{} || p != last || v.empty() || x < -1000000000LL || x > 1000000000LL)
      fail(ErrorKind::config, "key '" + key.name + "' expects an integer, got '" + v + "'");
    return std::to_string(x);
  }
  if (key.kind == KeyKind::real) {
    double x = 0.0;
    auto [p, ec] = std::from_chars(first, last, x);
    if (ec != std::errc{} || p != last || v.empty() || !std::isfinite(x))
      fail(ErrorKind::config, "key '" + key.name + "' expects a finite number, got '" + v + "'");
    return canonical_real(x);
  }
  return v;
}

}  // namespace

std::string canonical_real(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, p);
}

const std::vector<KeySpec>& config_keys() {
  static const std::vector<KeySpec> keys = {
      // ring
      {"n_loc", KeyKind::integer, "10", "1", "localization exponent of the initial packet"},
      {"helicity", KeyKind::integer, "10", "1", "beam helicity l of the diffracting pulse"},
      {"pulse_area", KeyKind::real, "6", "rad", "pulse area Omega tau"},
      {"xi", KeyKind::real, "1", "1/time", "rotational constant of the ring"},
      {"m_max", KeyKind::integer, "0", "hbar", "angular momentum range, 0 selects it automatically"},
      {"n_grid", KeyKind::integer, "2048", "1", "angular grid points"},
      {"xi_t", KeyKind::real, canonical_real(3e-3 * angular::kPi), "1", "evolution time for the evolve and farfield stages, times xi"},
      {"p_max", KeyKind::integer, "3", "1", "period images kept in the far-field sum"},
      {"farfield_tolerance", KeyKind::real, "1e-08", "1", "allowed far-field quadrature error"},
      {"farfield_grid", KeyKind::integer, "8192", "1", "samples of the initial profile fed to the far-field sum"},
      {"fig3_xi_t", KeyKind::real, canonical_real(3e-3 * angular::kPi), "1", "time of the first ring snapshot, times xi"},
      {"fig4_xi_t", KeyKind::real, canonical_real(6e-3 * angular::kPi), "1", "time of the second ring snapshot, times xi"},
      // lattice bands
      {"lattice_l", KeyKind::integer, "2", "1", "helicity of the trapping lattice"},
      {"depth", KeyKind::real, "10", "hbar xi", "lattice depth Omega in units of xi"},
      {"s_max", KeyKind::integer, "16", "1", "plane waves per quasimomentum block: 2 s_max + 1"},
      {"n_bands", KeyKind::integer, "4", "1", "bands reported"},
      {"wannier_band", KeyKind::integer, "0", "1", "band used for the Wannier profile"},
      {"fig1_pixels", KeyKind::integer, "200", "1", "pixels per side of the potential maps"},
      {"fig1_rho_inner", KeyKind::real, "0.5", "a", "inner radius of the drawn annulus"},
      {"fig1_rho_outer", KeyKind::real, "1", "a", "outer radius of the drawn annulus"},
      // radial
      {"box_radius", KeyKind::real, "1", "a", "radius of the hard-walled cylinder"},
      {"lambda", KeyKind::real, "1", "1/time", "radial energy scale hbar / (2 M a^2)"},
      {"rho0", KeyKind::real, "0.5", "a", "ring radius"},
      {"width", KeyKind::real, "0.01", "a", "radial Gaussian width"},
      {"n_max", KeyKind::integer, "0", "1", "radial modes, 0 grows them until the residual target is met"},
      {"residual_target", KeyKind::real, "0.001", "1", "allowed projection residual"},
      {"radial_m", KeyKind::integer, "10", "hbar", "angular momentum of the mean-radius trace"},
      {"trace_lambda_t", KeyKind::real, "0.4", "1", "length of the mean-radius trace, times lambda"},
      {"trace_step", KeyKind::real, "0.0002", "1", "sampling step of the mean-radius trace, times lambda"},
      {"slice_rho", KeyKind::real, "0.5", "a", "radius of the angular field slices"},
      {"fig6_lambda_t1", KeyKind::real, canonical_real(1e-3 * angular::kPi), "1", "time of the first field slice, times lambda"},
      {"fig6_lambda_t2", KeyKind::real, canonical_real(2e-3 * angular::kPi), "1", "time of the second field slice, times lambda"},
      // run control
      {"input", KeyKind::text, "", "", "CSV produced by an earlier stage"},
      {"tolerance_scale", KeyKind::real, "1", "1", "factor applied to every check tolerance"},
  };
  return keys;
}

SimConfig::SimConfig() {
  for (const auto& k : config_keys()) values_[k.name] = k.fallback;
}

void SimConfig::set(const std::string& key, const std::string& value) {
  const KeySpec* spec = find_key(trim(key));
  if (!spec) fail(ErrorKind::config, "unknown configuration key '" + trim(key) + "'");
  values_[spec->name] = canonical(*spec, value);
}

void SimConfig::load_text(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorKind::config, origin + ":" + std::to_string(lineno) + ": expected key = value");
    try {
      set(line.substr(0, eq), line.substr(eq + 1));
    } catch (const Error& e) {
      fail(ErrorKind::config, origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void SimConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::config, "cannot read configuration file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  load_text(buf.str(), path);
}

const std::string& SimConfig::text(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) fail(ErrorKind::config, "unknown configuration key '" + key + "'");
  return it->second;
}

int SimConfig::integer(const std::string& key) const { return std::stoi(text(key)); }

double SimConfig::real(const std::string& key) const {
  const std::string& v = text(key);
  double x = 0.0;
  std::from_chars(v.data(), v.data() + v.size(), x);
  return x;
}

angular::KickParams SimConfig::kick() const {
  angular::KickParams p;
  p.l = integer("helicity");
  p.pulse_area = real("pulse_area");
  p.n_loc = integer("n_loc");
  p.xi = real("xi");
  return p;
}

bands::LatticeSpec SimConfig::lattice() const {
  bands::LatticeSpec s;
  s.l = integer("lattice_l");
  s.depth = real("depth");
  s.s_max = integer("s_max");
  s.n_bands = integer("n_bands");
  return s;
}

radial::BoxParams SimConfig::box() const {
  radial::BoxParams b;
  b.a = real("box_radius");
  b.lambda = real("lambda");
  b.rho0 = real("rho0");
  b.width = real("width");
  b.n_max = integer("n_max");
  b.residual_target = real("residual_target");
  return b;
}

void SimConfig::validate() const {
  auto check = [](bool ok, const std::string& msg) {
    if (!ok) fail(ErrorKind::config, msg);
  };
  try {
    kick().validate();
    lattice().validate();
    box().validate();
  } catch (const Error& e) {
    fail(ErrorKind::config, e.what());
  }
  check(integer("m_max") >= 0, "m_max must be non-negative");
  check(integer("n_grid") >= 16, "n_grid must be at least 16");
  check(real("xi_t") > 0.0, "xi_t must be positive");
  check(real("fig3_xi_t") > 0.0 && real("fig4_xi_t") > 0.0, "snapshot times must be positive");
  check(integer("p_max") >= 0, "p_max must be non-negative");
  check(integer("farfield_grid") >= 16 && integer("farfield_grid") % 2 == 0,
        "farfield_grid must be even and at least 16");
  check(real("farfield_tolerance") > 0.0, "farfield_tolerance must be positive");
  check(integer("wannier_band") >= 0 && integer("wannier_band") < integer("n_bands"),
        "wannier_band must be one of the reported bands");
  check(integer("fig1_pixels") >= 64, "fig1_pixels must be at least 64");
  check(real("fig1_rho_inner") >= 0.0 && real("fig1_rho_outer") > real("fig1_rho_inner"),
        "fig1 annulus needs 0 <= fig1_rho_inner < fig1_rho_outer");
  check(real("trace_lambda_t") > 0.0 && real("trace_step") > 0.0 &&
            real("trace_lambda_t") / real("trace_step") <= 1e7,
        "trace_lambda_t and trace_step must be positive with at most 1e7 samples");
  check(real("slice_rho") > 0.0 && real("slice_rho") < real("box_radius"),
        "slice_rho must lie inside the box");
  check(real("fig6_lambda_t1") >= 0.0 && real("fig6_lambda_t2") >= 0.0,
        "field slice times must be non-negative");
  check(real("tolerance_scale") > 0.0, "tolerance_scale must be positive");
}

}  // namespace ringlattice::app
