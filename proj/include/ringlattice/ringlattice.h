#ifndef RINGLATTICE_H
#define RINGLATTICE_H

/* C interface to the ring lattice simulation. Every call returns an rl_status;
 * on failure rl_last_error() describes the problem for the calling thread.
 * Objects are opaque and released with their _destroy function. */

#include <stddef.h>

#if defined(_WIN32)
#  define RL_API __declspec(dllexport)
#else
#  define RL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rl_status {
  RL_OK = 0,
  RL_ERR_IO = 1,
  RL_ERR_CONFIG = 2,
  RL_ERR_ACCURACY = 3,
  RL_ERR_CHECK = 4,
  RL_ERR_DOMAIN = 5,
  RL_ERR_TRUNCATION = 6,
  RL_ERR_SCHEMA = 7,
  RL_ERR_ARGUMENT = 8,
  RL_ERR_INTERNAL = 9
} rl_status;

typedef struct rl_config rl_config;
typedef struct rl_spectrum rl_spectrum;
typedef struct rl_bands rl_bands;

RL_API const char* rl_version(void);
/* Message of the last failed call on this thread, "" if none. */
RL_API const char* rl_last_error(void);

/* ---- configuration ---- */
RL_API rl_status rl_config_create(rl_config** out);
RL_API void rl_config_destroy(rl_config* cfg);
/* Unknown keys and malformed values give RL_ERR_CONFIG. */
RL_API rl_status rl_config_set(rl_config* cfg, const char* key, const char* value);
RL_API rl_status rl_config_load_file(rl_config* cfg, const char* path);
/* Canonical text of a key, truncated to buf_len - 1 characters. */
RL_API rl_status rl_config_get(const rl_config* cfg, const char* key, char* buf, size_t buf_len);

/* ---- commands; each writes CSV data and a JSON manifest into out_dir ---- */
RL_API rl_status rl_run_figure(const rl_config* cfg, int which, const char* out_dir, int svg);
/* stage: "kick", "evolve", "farfield", "bands" or "radial" */
RL_API rl_status rl_run_stage(const rl_config* cfg, const char* stage, const char* out_dir, int svg);

typedef void (*rl_check_callback)(int id, const char* name, int passed, const char* line, void* user);
/* Runs the acceptance criteria; RL_ERR_CHECK when any fails. failed may be NULL. */
RL_API rl_status rl_run_check(const rl_config* cfg, const char* out_dir, rl_check_callback callback, void* user,
                              int* failed);

/* ---- ring spectra ---- */
RL_API rl_status rl_spectrum_initial(int n_loc, int m_max, rl_spectrum** out);
/* m_max_out = 0 picks the smallest range that holds the result. */
RL_API rl_status rl_spectrum_kick(const rl_spectrum* in, int helicity, double pulse_area, int m_max_out,
                                  rl_spectrum** out);
RL_API rl_status rl_spectrum_evolve(const rl_spectrum* in, double xi, double t, rl_spectrum** out);
RL_API int rl_spectrum_m_max(const rl_spectrum* s);
/* Amplitude at m; zero outside the stored range. */
RL_API rl_status rl_spectrum_get(const rl_spectrum* s, int m, double* re, double* im);
RL_API double rl_spectrum_norm(const rl_spectrum* s);
/* |psi(phi_j)|^2 on phi_j = 2 pi j / n_grid into out[0..n_grid-1]. */
RL_API rl_status rl_spectrum_density(const rl_spectrum* s, int n_grid, double* out);
RL_API void rl_spectrum_destroy(rl_spectrum* s);

/* ---- lattice bands ---- */
RL_API rl_status rl_bands_solve(int helicity, double depth, int s_max, int n_bands, rl_bands** out);
/* q in [-helicity, helicity), band in [0, n_bands) */
RL_API rl_status rl_bands_energy(const rl_bands* b, int q, int band, double* energy);
RL_API void rl_bands_destroy(rl_bands* b);

/* ---- radial dynamics in the cylinder of radius 1 ---- */
/* <rho(t)> of the Gaussian ring packet with angular momentum m at n_times times. */
RL_API rl_status rl_radial_mean_radius(double lambda, double rho0, double width, int m, const double* times,
                                       size_t n_times, double* out);

#ifdef __cplusplus
}
#endif

#endif
