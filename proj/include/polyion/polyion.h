/* polyion: trapped polyatomic molecular ion state preparation and readout
 * simulation toolkit.  C API over the C++ core; all functions return a
 * status code and report details via polyion_last_error(). */

#ifndef POLYION_H
#define POLYION_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__) || defined(__clang__)
#define POLYION_API __attribute__((visibility("default")))
#else
#define POLYION_API
#endif

typedef enum {
    POLYION_OK = 0,
    POLYION_ERR_SCHEMA = 2,  /* config/schema violation */
    POLYION_ERR_NUMERIC = 3, /* numeric/integration failure */
} polyion_status;

POLYION_API const char* polyion_version(void);

/* message for the last failing call on this thread; empty string if none */
POLYION_API const char* polyion_last_error(void);

/* ------------------------------------------------------------------ runs */

typedef struct polyion_run_config polyion_run_config;

POLYION_API polyion_status polyion_run_config_create(polyion_run_config** out);
POLYION_API void polyion_run_config_destroy(polyion_run_config* cfg);

POLYION_API polyion_status polyion_run_config_set_species_file(polyion_run_config* cfg,
                                                               const char* path);
POLYION_API polyion_status polyion_run_config_set_setup_file(polyion_run_config* cfg,
                                                             const char* path);
POLYION_API polyion_status polyion_run_config_set_experiment(polyion_run_config* cfg,
                                                             const char* name);
POLYION_API polyion_status polyion_run_config_set_seed(polyion_run_config* cfg, uint64_t seed);
POLYION_API polyion_status polyion_run_config_set_out_dir(polyion_run_config* cfg,
                                                          const char* path);
POLYION_API polyion_status polyion_run_config_set_override(polyion_run_config* cfg,
                                                           const char* key, const char* value);
POLYION_API polyion_status polyion_run_config_set_threads(polyion_run_config* cfg, int n);

/* collect all diagnostics; returns the number found and writes up to cap
 * of them (newline-joined) into buf */
POLYION_API int polyion_validate(const polyion_run_config* cfg, char* buf, size_t cap);

/* dispatch the configured experiment; artifacts are written to out_dir */
POLYION_API polyion_status polyion_run(const polyion_run_config* cfg);

/* ------------------------------------------------ scalar derived quantities */

/* I0 = 2 P / (pi w0^2), W/m^2 */
POLYION_API polyion_status polyion_peak_intensity(double power_W, double waist_m, double* out);

/* U0 = alpha_eff I0 / (c eps0), joules */
POLYION_API polyion_status polyion_potential_depth(double alpha_eff_SI, double intensity,
                                                   double* out);

/* omega_lattice = sqrt(16 pi^2 U0 / (lambda^2 m)), rad/s */
POLYION_API polyion_status polyion_lattice_secular_frequency(double U0_J, double wavelength_m,
                                                             double mass_kg, double* out);

/* Omega_R = 2 pi V D / (d h), rad/s */
POLYION_API polyion_status polyion_rabi_from_voltage(double volts, double dipole_Cm,
                                                     double spacing_m, double* out);

#ifdef __cplusplus
}
#endif

#endif /* POLYION_H */
