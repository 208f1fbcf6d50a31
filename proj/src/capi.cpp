#include "ringlattice/ringlattice.h"

#include <chrono>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "ringlattice/app.hpp"
#include "ringlattice/bands.hpp"
#include "ringlattice/error.hpp"

struct rl_config {
  ringlattice::app::SimConfig cfg;
};

struct rl_spectrum {
  ringlattice::angular::AngularSpectrum spec;
};

struct rl_bands {
  ringlattice::bands::BandStructure bands;
};

namespace {

using namespace ringlattice;

thread_local std::string last_error;

rl_status status_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config: return RL_ERR_CONFIG;
    case ErrorKind::domain: return RL_ERR_DOMAIN;
    case ErrorKind::truncation: return RL_ERR_TRUNCATION;
    case ErrorKind::accuracy: return RL_ERR_ACCURACY;
    case ErrorKind::schema: return RL_ERR_SCHEMA;
    case ErrorKind::io: return RL_ERR_IO;
  }
  return RL_ERR_INTERNAL;
}

template <class Fn>
rl_status guarded(Fn&& fn) {
  try {
    last_error.clear();
    return fn();
  } catch (const Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return RL_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return RL_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return RL_ERR_INTERNAL;
  }
}

rl_status null_argument(const char* what) {
  last_error = std::string("null argument: ") + what;
  return RL_ERR_ARGUMENT;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

extern "C" {

const char* rl_version(void) { return app::library_version(); }

const char* rl_last_error(void) { return last_error.c_str(); }

rl_status rl_config_create(rl_config** out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = new rl_config{};
    return RL_OK;
  });
}

void rl_config_destroy(rl_config* cfg) { delete cfg; }

rl_status rl_config_set(rl_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return null_argument("cfg, key or value");
  return guarded([&] {
    cfg->cfg.set(key, value);
    return RL_OK;
  });
}

rl_status rl_config_load_file(rl_config* cfg, const char* path) {
  if (!cfg || !path) return null_argument("cfg or path");
  return guarded([&] {
    cfg->cfg.load_file(path);
    return RL_OK;
  });
}

rl_status rl_config_get(const rl_config* cfg, const char* key, char* buf, size_t buf_len) {
  if (!cfg || !key || !buf || buf_len == 0) return null_argument("cfg, key or buf");
  return guarded([&] {
    const std::string& v = cfg->cfg.text(key);
    const std::size_t n = std::min(v.size(), buf_len - 1);
    std::memcpy(buf, v.data(), n);
    buf[n] = '\0';
    return RL_OK;
  });
}

rl_status rl_run_figure(const rl_config* cfg, int which, const char* out_dir, int svg) {
  if (!cfg || !out_dir) return null_argument("cfg or out_dir");
  return guarded([&] {
    const auto t0 = std::chrono::steady_clock::now();
    const auto run = app::run_figure(which, cfg->cfg, out_dir, svg != 0);
    app::write_manifest(out_dir, app::manifest(run, cfg->cfg, seconds_since(t0)));
    return RL_OK;
  });
}

rl_status rl_run_stage(const rl_config* cfg, const char* stage, const char* out_dir, int svg) {
  if (!cfg || !stage || !out_dir) return null_argument("cfg, stage or out_dir");
  return guarded([&] {
    const auto t0 = std::chrono::steady_clock::now();
    const auto run = app::run_stage(stage, cfg->cfg, out_dir, svg != 0);
    app::write_manifest(out_dir, app::manifest(run, cfg->cfg, seconds_since(t0)));
    return RL_OK;
  });
}

rl_status rl_run_check(const rl_config* cfg, const char* out_dir, rl_check_callback callback, void* user,
                       int* failed) {
  if (!cfg || !out_dir) return null_argument("cfg or out_dir");
  return guarded([&] {
    const auto t0 = std::chrono::steady_clock::now();
    app::RunResult run;
    run.command = "check";
    const auto results = app::run_checks(
        cfg->cfg, out_dir,
        [&](const app::CheckResult& r) {
          if (callback) callback(r.id, r.name.c_str(), r.passed ? 1 : 0, app::format_check(r).c_str(), user);
        },
        &run.files);
    int bad = 0;
    for (const auto& r : results) bad += r.passed ? 0 : 1;
    app::write_manifest(out_dir, app::manifest(run, cfg->cfg, seconds_since(t0), &results));
    if (failed) *failed = bad;
    if (bad > 0) {
      last_error = std::to_string(bad) + " acceptance criteria failed";
      return RL_ERR_CHECK;
    }
    return RL_OK;
  });
}

rl_status rl_spectrum_initial(int n_loc, int m_max, rl_spectrum** out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = new rl_spectrum{angular::initial_spectrum(n_loc, m_max)};
    return RL_OK;
  });
}

rl_status rl_spectrum_kick(const rl_spectrum* in, int helicity, double pulse_area, int m_max_out,
                           rl_spectrum** out) {
  if (!in || !out) return null_argument("in or out");
  return guarded([&] {
    angular::KickParams p;
    p.l = helicity;
    p.pulse_area = pulse_area;
    *out = new rl_spectrum{angular::apply_kick_bessel(in->spec, p, m_max_out)};
    return RL_OK;
  });
}

rl_status rl_spectrum_evolve(const rl_spectrum* in, double xi, double t, rl_spectrum** out) {
  if (!in || !out) return null_argument("in or out");
  return guarded([&] {
    *out = new rl_spectrum{angular::free_evolve(in->spec, xi, t)};
    return RL_OK;
  });
}

int rl_spectrum_m_max(const rl_spectrum* s) { return s ? s->spec.m_max() : -1; }

rl_status rl_spectrum_get(const rl_spectrum* s, int m, double* re, double* im) {
  if (!s || !re || !im) return null_argument("s, re or im");
  const auto a = s->spec.at(m);
  *re = a.real();
  *im = a.imag();
  last_error.clear();
  return RL_OK;
}

double rl_spectrum_norm(const rl_spectrum* s) { return s ? s->spec.norm_squared() : 0.0; }

rl_status rl_spectrum_density(const rl_spectrum* s, int n_grid, double* out) {
  if (!s || !out) return null_argument("s or out");
  return guarded([&] {
    if (n_grid < 1) fail(ErrorKind::domain, "n_grid must be positive");
    const auto prof = angular::synthesize(s->spec, n_grid);
    for (int j = 0; j < n_grid; ++j) out[j] = std::norm(prof[j]);
    return RL_OK;
  });
}

void rl_spectrum_destroy(rl_spectrum* s) { delete s; }

rl_status rl_bands_solve(int helicity, double depth, int s_max, int n_bands, rl_bands** out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = new rl_bands{bands::solve_bands(bands::LatticeSpec{helicity, depth, s_max, n_bands})};
    return RL_OK;
  });
}

rl_status rl_bands_energy(const rl_bands* b, int q, int band, double* energy) {
  if (!b || !energy) return null_argument("b or energy");
  return guarded([&] {
    *energy = b->bands.state(q, band).energy;
    return RL_OK;
  });
}

void rl_bands_destroy(rl_bands* b) { delete b; }

rl_status rl_radial_mean_radius(double lambda, double rho0, double width, int m, const double* times,
                                size_t n_times, double* out) {
  if ((!times || !out) && n_times > 0) return null_argument("times or out");
  return guarded([&] {
    radial::BoxParams box;
    box.lambda = lambda;
    box.rho0 = rho0;
    box.width = width;
    box.validate();
    const auto state = radial::project_initial(box, m);
    const radial::MeanRadius mean(state, box);
    for (size_t k = 0; k < n_times; ++k) out[k] = mean(times[k]);
    return RL_OK;
  });
}

}  // extern "C"
