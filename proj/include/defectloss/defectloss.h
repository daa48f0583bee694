// Copyright 2026 The defectloss Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/*
 * C interface to the defectloss library.
 *
 * Every function returns a dl_status. On failure the message for the calling
 * thread is available from dl_last_error() until the next failing call.
 * Objects are opaque handles created by *_create / *_load functions and
 * released with the matching *_destroy; destroy functions accept NULL.
 * Output pointers are only written on success.
 *
 * Units are SI unless a parameter name says otherwise. Frequencies are
 * angular (rad/s).
 */

#ifndef DEFECTLOSS_H
#define DEFECTLOSS_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(DEFECTLOSS_BUILDING)
#    define DL_API __declspec(dllexport)
#  else
#    define DL_API __declspec(dllimport)
#  endif
#else
#  define DL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dl_status {
  DL_OK = 0,
  DL_ERR_INVALID_ARGUMENT = 1,
  DL_ERR_PARSE = 2,
  DL_ERR_IO = 3,
  DL_ERR_NUMERICAL = 4,
  DL_ERR_NOT_FOUND = 5,
  DL_ERR_NULL_POINTER = 6,
  DL_ERR_INTERNAL = 7
} dl_status;

typedef enum dl_local_field {
  DL_LOCAL_FIELD_ONSAGER = 0,
  DL_LOCAL_FIELD_LORENTZ_LORENZ = 1,
  DL_LOCAL_FIELD_UNITY = 2
} dl_local_field;

typedef enum dl_velocity {
  DL_VELOCITY_TRANSVERSE = 0,
  DL_VELOCITY_LONGITUDINAL = 1,
  DL_VELOCITY_FITTED = 2
} dl_velocity;

typedef enum dl_interpolation {
  DL_INTERP_MONOTONE_CUBIC = 0,
  DL_INTERP_LINEAR = 1
} dl_interpolation;

typedef enum dl_table_format {
  DL_FORMAT_CSV = 0,
  DL_FORMAT_TEXT = 1,
  DL_FORMAT_JSON = 2
} dl_table_format;

DL_API const char* dl_version(void);
DL_API const char* dl_last_error(void);
DL_API const char* dl_status_name(dl_status status);

/* ---- physical relations ------------------------------------------------ */

DL_API dl_status dl_average_atomic_mass_amu(const char* formula, double* out_amu);
DL_API dl_status dl_sound_velocities(double bulk_modulus_pa, double shear_modulus_pa,
                                     double mass_density, double* out_v_t, double* out_v_l);
DL_API dl_status dl_debye_frequency(double site_density, double sound_velocity, double* out_omega_m);
/* eps is row-major 3x3. */
DL_API dl_status dl_refractive_index(const double eps[9], double* out_n_r);
DL_API dl_status dl_local_field_factor(double eps, dl_local_field model, double* out_factor);
DL_API dl_status dl_characteristic_parameter(double n_r, double mean_mass_kg, double omega_m,
                                             double field_factor, double* out_a_c);
DL_API dl_status dl_loss_tangent(double absorption, double n_r, double omega, double* out_tan_delta);
DL_API dl_status dl_attenuate(double intensity0, double absorption, double depth, double* out);
DL_API dl_status dl_temperature_bound(double omega, double* out_kelvin);
DL_API dl_status dl_corrected_gap(double e_g_pbe_ev, double* out_ev);
DL_API dl_status dl_angular_from_ghz(double f_ghz, double* out_omega);

/* ---- defect populations ------------------------------------------------ */

typedef struct dl_defects dl_defects;

DL_API dl_status dl_defects_create(dl_defects** out);
DL_API void dl_defects_destroy(dl_defects* d);
DL_API dl_status dl_defects_add(dl_defects* d, double z_eff, double n_def_per_m3);
DL_API dl_status dl_defects_count(const dl_defects* d, size_t* out);
DL_API dl_status dl_defects_get(const dl_defects* d, size_t index, double* out_z_eff,
                                double* out_n_def_per_m3);
/* Sum of N Z^2 (1/m^3). */
DL_API dl_status dl_defects_weighted_density(const dl_defects* d, double* out);
DL_API dl_status dl_defects_is_neutral(const dl_defects* d, int* out_neutral);
/* Parses "Z,N/cm3" or "Z,N/m3" (e.g. "-3,0.333e18/cm3"). Bare numbers are
 * rejected. */
DL_API dl_status dl_parse_defect_spec(const char* spec, double* out_z_eff, double* out_n_def_per_m3);

DL_API dl_status dl_absorption_coefficient(const dl_defects* d, double a_c, double omega,
                                           double* out_absorption);
DL_API dl_status dl_cross_section(double z_eff, double field_factor, double n_r,
                                  double mean_mass_kg, double omega, double omega_m,
                                  double* out_sigma);
DL_API dl_status dl_loss_tangent_direct(const dl_defects* d, double field_factor, double n_r,
                                        double mass_density, double sound_velocity,
                                        double omega, double* out_tan_delta);

/* ---- host materials ---------------------------------------------------- */

typedef struct dl_host dl_host;

typedef struct dl_host_params {
  const char* id;
  const char* formula;
  double mass_density;        /* kg/m^3 */
  double site_density;        /* atoms/m^3 */
  double bulk_modulus;        /* Pa */
  double shear_modulus;       /* Pa */
  double dielectric[9];       /* row-major */
  double band_gap_pbe_ev;
  const char* space_group;    /* may be NULL */
  int centrosymmetric;
  int magnetic;
} dl_host_params;

typedef struct dl_host_info {
  const char* id;             /* owned by the host handle */
  const char* formula;
  const char* space_group;
  double mass_density;
  double site_density;
  double bulk_modulus;
  double shear_modulus;
  double dielectric[9];
  double band_gap_pbe_ev;
  double mean_mass_amu;
  int centrosymmetric;
  int magnetic;
} dl_host_info;

typedef struct dl_derive_options {
  dl_local_field local_field;
  dl_velocity velocity;
  double fitted_velocity;     /* m/s, used with DL_VELOCITY_FITTED */
} dl_derive_options;

typedef struct dl_host_derived {
  double v_t;
  double v_l;
  double v_s;
  double omega_m;
  double n_r;
  double eps;
  double field_factor;
  double mean_mass_kg;
  double a_c;
} dl_host_derived;

typedef struct dl_loss_result {
  double omega;
  double sigma;       /* density-weighted mean cross section per defect */
  double absorption;  /* 1/m */
  double tan_delta;
  double t_star;      /* K */
} dl_loss_result;

DL_API dl_derive_options dl_derive_options_default(void);

/* Validation runs at creation; invalid hosts are rejected with the list of
 * violations in dl_last_error(). */
DL_API dl_status dl_host_create(const dl_host_params* params, dl_host** out);
/* One database-export JSON object (see the screening input format). */
DL_API dl_status dl_host_from_record_json(const char* json_line, dl_host** out);
/* First record in a line-delimited JSON file whose material_id equals id, or
 * the first record if id is NULL. */
DL_API dl_status dl_host_load_record(const char* path, const char* id, dl_host** out);
DL_API void dl_host_destroy(dl_host* h);
DL_API dl_status dl_host_info_get(const dl_host* h, dl_host_info* out);
DL_API dl_status dl_host_derive(const dl_host* h, const dl_derive_options* opts,
                                dl_host_derived* out);
DL_API dl_status dl_evaluate(const dl_host_derived* host, const dl_defects* d, double omega,
                             dl_loss_result* out);

/* ---- mass-defect spectral model ---------------------------------------- */

typedef struct dl_spectrum dl_spectrum;

DL_API dl_status dl_spectrum_debye(double omega_m, dl_spectrum** out);
DL_API dl_status dl_spectrum_from_dos(const double* omega, const double* rho, size_t n,
                                      dl_interpolation interp, dl_spectrum** out);
/* CSV with header omega_rad_per_s,rho_per_rad_per_s. */
DL_API dl_status dl_spectrum_from_dos_file(const char* path, dl_interpolation interp,
                                           dl_spectrum** out);
DL_API void dl_spectrum_destroy(dl_spectrum* s);
DL_API dl_status dl_spectrum_mu_max(const dl_spectrum* s, double* out);
DL_API dl_status dl_spectrum_value(const dl_spectrum* s, double mu, double* out);
DL_API dl_status dl_pv_integral(const dl_spectrum* s, double z, double* out);
DL_API dl_status dl_chi_squared(const dl_spectrum* s, double eps_mass, double n_atoms, double z,
                                double* out);
DL_API dl_status dl_acoustic_limit(const dl_spectrum* s, double eps_mass, double n_atoms,
                                   double* out_value, double* out_error);
/* Writes z,chi2_times_Na,pv_value rows; path "-" writes to stdout. */
DL_API dl_status dl_chi_sweep_write_csv(const dl_spectrum* s, double eps_mass, const double* z,
                                        size_t n, unsigned threads, const char* path);

/* ---- screening --------------------------------------------------------- */

typedef struct dl_screen_config dl_screen_config;
typedef struct dl_overrides dl_overrides;
typedef struct dl_screen_result dl_screen_result;

typedef struct dl_screen_config_values {
  double frequency_ghz;
  double n_def_per_cm3;
  double z_eff;
  dl_local_field local_field;
  dl_velocity velocity;
  double gap_threshold_ev;
  double magnetization_threshold_mu_b;
  int dielectric_electronic;
  unsigned threads;
} dl_screen_config_values;

typedef struct dl_screen_counts {
  size_t total;
  size_t included;
  size_t no_gap;
  size_t magnetic;
  size_t missing_elastic;
  size_t missing_dielectric;
  size_t invalid_data;
} dl_screen_counts;

typedef struct dl_screen_row {
  const char* id;            /* owned by the result handle */
  const char* formula;
  const char* space_group;
  int centrosymmetric;
  double omega_m;
  double n_r;
  double a_c;
  double tan_delta;
  double e_g_corrected_ev;
  double mean_mass_kg;
} dl_screen_row;

DL_API dl_status dl_screen_config_create(dl_screen_config** out);
/* key = value file; see README for keys. */
DL_API dl_status dl_screen_config_load(const char* path, dl_screen_config** out);
DL_API void dl_screen_config_destroy(dl_screen_config* c);
DL_API dl_status dl_screen_config_get(const dl_screen_config* c, dl_screen_config_values* out);
DL_API dl_status dl_screen_config_set(dl_screen_config* c, const dl_screen_config_values* v);

DL_API dl_status dl_overrides_load(const char* path, dl_overrides** out);
DL_API void dl_overrides_destroy(dl_overrides* o);

/* overrides may be NULL. */
DL_API dl_status dl_screen_file(const char* db_path, const dl_screen_config* cfg,
                                const dl_overrides* overrides, dl_screen_result** out);
DL_API dl_status dl_screen_text(const char* jsonl, const dl_screen_config* cfg,
                                const dl_overrides* overrides, dl_screen_result** out);
DL_API void dl_screen_result_destroy(dl_screen_result* r);
DL_API dl_status dl_screen_counts_get(const dl_screen_result* r, dl_screen_counts* out);
/* Included rows in ranked order. */
DL_API dl_status dl_screen_row_get(const dl_screen_result* r, size_t index, dl_screen_row* out);
/* path "-" writes to stdout. */
DL_API dl_status dl_screen_write_table(const dl_screen_result* r, const char* path,
                                       dl_table_format format);
DL_API dl_status dl_screen_write_figures(const dl_screen_result* r, const char* debye_path,
                                         const char* gap_path);
DL_API dl_status dl_screen_write_exclusions(const dl_screen_result* r, const char* path);

/* Curated line-delimited JSON records for the eighteen reference materials, compiled
 * into the library. */
DL_API const char* dl_bundled_fixture(void);

#ifdef __cplusplus
}
#endif

#endif /* DEFECTLOSS_H */
