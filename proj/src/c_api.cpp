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

#include "defectloss/defectloss.h"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "defectloss/constants.hpp"
#include "defectloss/error.hpp"
#include "defectloss/loss_physics.hpp"
#include "defectloss/screening.hpp"
#include "defectloss/spectral.hpp"

namespace dl = defectloss;

struct dl_defects {
  dl::DefectPopulation population;
};

struct dl_host {
  dl::HostMaterial host;
  std::string formula;
};

struct dl_spectrum {
  dl::SpectralDensity nu;
};

struct dl_screen_config {
  dl::ScreenConfig cfg;
};

struct dl_overrides {
  dl::DefectOverrides map;
};

struct dl_screen_result {
  dl::ScreenResult result;
};

namespace defectloss::assets {
extern const std::string_view table1_fixture_jsonl;
}

namespace {

thread_local std::string g_last_error;

dl_status set_error(dl_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

dl_status from_kind(dl::ErrorKind k) {
  switch (k) {
    case dl::ErrorKind::InvalidArgument: return DL_ERR_INVALID_ARGUMENT;
    case dl::ErrorKind::Parse: return DL_ERR_PARSE;
    case dl::ErrorKind::Io: return DL_ERR_IO;
    case dl::ErrorKind::Numerical: return DL_ERR_NUMERICAL;
  }
  return DL_ERR_INTERNAL;
}

template <class F>
dl_status guarded(F&& f) {
  try {
    return f();
  } catch (const dl::Error& e) {
    return set_error(from_kind(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(DL_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(DL_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(DL_ERR_INTERNAL, "unknown exception");
  }
}

#define DL_REQUIRE_PTR(p)   if ((p) == nullptr) return set_error(DL_ERR_NULL_POINTER, "null pointer: " #p)

dl::LocalFieldModel to_model(dl_local_field m) {
  switch (m) {
    case DL_LOCAL_FIELD_ONSAGER: return dl::LocalFieldModel::Onsager;
    case DL_LOCAL_FIELD_LORENTZ_LORENZ: return dl::LocalFieldModel::LorentzLorenz;
    case DL_LOCAL_FIELD_UNITY: return dl::LocalFieldModel::Unity;
  }
  dl::fail(dl::ErrorKind::InvalidArgument, "unknown local-field model");
}

dl_local_field from_model(dl::LocalFieldModel m) {
  switch (m) {
    case dl::LocalFieldModel::Onsager: return DL_LOCAL_FIELD_ONSAGER;
    case dl::LocalFieldModel::LorentzLorenz: return DL_LOCAL_FIELD_LORENTZ_LORENZ;
    case dl::LocalFieldModel::Unity: return DL_LOCAL_FIELD_UNITY;
  }
  return DL_LOCAL_FIELD_ONSAGER;
}

dl::VelocityChoice to_velocity(dl_velocity v) {
  switch (v) {
    case DL_VELOCITY_TRANSVERSE: return dl::VelocityChoice::Transverse;
    case DL_VELOCITY_LONGITUDINAL: return dl::VelocityChoice::Longitudinal;
    case DL_VELOCITY_FITTED: return dl::VelocityChoice::Fitted;
  }
  dl::fail(dl::ErrorKind::InvalidArgument, "unknown velocity choice");
}

dl_velocity from_velocity(dl::VelocityChoice v) {
  switch (v) {
    case dl::VelocityChoice::Transverse: return DL_VELOCITY_TRANSVERSE;
    case dl::VelocityChoice::Longitudinal: return DL_VELOCITY_LONGITUDINAL;
    case dl::VelocityChoice::Fitted: return DL_VELOCITY_FITTED;
  }
  return DL_VELOCITY_TRANSVERSE;
}

dl::Interpolation to_interp(dl_interpolation i) {
  return i == DL_INTERP_LINEAR ? dl::Interpolation::Linear : dl::Interpolation::MonotoneCubic;
}

dl::Tensor3 to_tensor(const double e[9]) {
  dl::Tensor3 t{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t[i][j] = e[3 * i + j];
  return t;
}

template <class W>
void write_to(const char* path, W&& write) {
  if (path == nullptr || std::string_view(path) == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) dl::fail(dl::ErrorKind::Io, std::string("cannot open for writing: ") + path);
  write(out);
  out.flush();
  if (!out) dl::fail(dl::ErrorKind::Io, std::string("write failed: ") + path);
}

dl_status make_host(dl::HostMaterial host, dl_host** out) {
  if (const auto v = dl::validate(host); !v.empty()) {
    std::string msg = "invalid host '" + host.id + "':";
    for (const auto& x : v) msg += " " + x.field + " " + x.message + ";";
    return set_error(DL_ERR_INVALID_ARGUMENT, msg);
  }
  auto* h = new dl_host{std::move(host), {}};
  h->formula = dl::to_formula(h->host.composition);
  *out = h;
  return DL_OK;
}

}  // namespace

extern "C" {

const char* dl_version(void) { return "1.0.0"; }
const char* dl_last_error(void) { return g_last_error.c_str(); }

const char* dl_status_name(dl_status status) {
  switch (status) {
    case DL_OK: return "ok";
    case DL_ERR_INVALID_ARGUMENT: return "invalid argument";
    case DL_ERR_PARSE: return "parse error";
    case DL_ERR_IO: return "i/o error";
    case DL_ERR_NUMERICAL: return "numerical failure";
    case DL_ERR_NOT_FOUND: return "not found";
    case DL_ERR_NULL_POINTER: return "null pointer";
    case DL_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

dl_status dl_average_atomic_mass_amu(const char* formula, double* out_amu) {
  DL_REQUIRE_PTR(formula);
  DL_REQUIRE_PTR(out_amu);
  return guarded([&] {
    *out_amu = dl::average_atomic_mass_amu(dl::parse_formula(formula));
    return DL_OK;
  });
}

dl_status dl_sound_velocities(double k, double g, double rho, double* out_v_t, double* out_v_l) {
  DL_REQUIRE_PTR(out_v_t);
  DL_REQUIRE_PTR(out_v_l);
  return guarded([&] {
    const auto v = dl::sound_velocities(k, g, rho);
    *out_v_t = v.transverse;
    *out_v_l = v.longitudinal;
    return DL_OK;
  });
}

dl_status dl_debye_frequency(double site_density, double sound_velocity, double* out) {
  DL_REQUIRE_PTR(out);
  return guarded([&] {
    *out = dl::debye_frequency(site_density, sound_velocity);
    return DL_OK;
  });
}

dl_status dl_refractive_index(const double eps[9], double* out) {
  DL_REQUIRE_PTR(eps);
  DL_REQUIRE_PTR(out);
  return guarded([&] {
    *out = dl::refractive_index(to_tensor(eps));
    return DL_OK;
  });
}

dl_status dl_local_field_factor(double eps, dl_local_field model, double* out) {
  DL_REQUIRE_PTR(out);
  return guarded([&] {
    *out = dl::local_field_factor(eps, to_model(model));
    return DL_OK;
  });
}

dl_status dl_characteristic_parameter(double n_r, double mean_mass_kg, double omega_m,
                                      double field_factor, double* out) {
  DL_REQUIRE_PTR(out);
  return guarded([&] {
    *out = dl::characteristic_parameter(n_r, mean_mass_kg, omega_m, field_factor);
    return DL_OK;
  });
}

dl_status dl_loss_tangent(double absorption, double n_r, double omega, double* out) {
  DL_REQUIRE_PTR(out);
  return guarded([&] {
    *out = dl::loss_tangent(absorption, n_r, omega);
    return DL_OK;
  });
}

dl_status dl_attenuate(double intensity0, double absorption, double depth, double* out) {
  DL_REQUIRE_PTR(out);
  return guarded([&] {
    *out = dl::attenuate(intensity0, absorption, depth);
    return DL_OK;
  });
}

dl_status dl_temperature_bound(double omega, double* out) {
  DL_REQUIRE_PTR(out);
  return guarded([&] {
    *out = dl::temperature_bound(omega);
    return DL_OK;
  });
}

dl_status dl_corrected_gap(double e_g_pbe_ev, double* out) {
  DL_REQUIRE_PTR(out);
  return guarded([&] {
    *out = dl::corrected_gap(e_g_pbe_ev);
    return DL_OK;
  });
}

dl_status dl_angular_from_ghz(double f_ghz, double* out) {
  DL_REQUIRE_PTR(out);
  if (!std::isfinite(f_ghz) || f_ghz < 0.0)
    return set_error(DL_ERR_INVALID_ARGUMENT, "frequency must be finite and >= 0");
  *out = dl::units::angular_from_ghz(f_ghz);
  return DL_OK;
}

// -- defects --

dl_status dl_defects_create(dl_defects** out) {
  DL_REQUIRE_PTR(out);
  return guarded([&] {
    *out = new dl_defects{};
    return DL_OK;
  });
}

void dl_defects_destroy(dl_defects* d) { delete d; }

dl_status dl_defects_add(dl_defects* d, double z_eff, double n_def_per_m3) {
  DL_REQUIRE_PTR(d);
  return guarded([&] {
    d->population.add({z_eff, n_def_per_m3});
    return DL_OK;
  });
}

dl_status dl_defects_count(const dl_defects* d, size_t* out) {
  DL_REQUIRE_PTR(d);
  DL_REQUIRE_PTR(out);
  *out = d->population.species().size();
  return DL_OK;
}

dl_status dl_defects_get(const dl_defects* d, size_t index, double* out_z, double* out_n) {
  DL_REQUIRE_PTR(d);
  DL_REQUIRE_PTR(out_z);
  DL_REQUIRE_PTR(out_n);
  const auto& s = d->population.species();
  if (index >= s.size()) return set_error(DL_ERR_NOT_FOUND, "defect index out of range");
  *out_z = s[index].z_eff;
  *out_n = s[index].n_def;
  return DL_OK;
}

dl_status dl_defects_weighted_density(const dl_defects* d, double* out) {
  DL_REQUIRE_PTR(d);
  DL_REQUIRE_PTR(out);
  *out = d->population.weighted_charge_density();
  return DL_OK;
}

dl_status dl_defects_is_neutral(const dl_defects* d, int* out) {
  DL_REQUIRE_PTR(d);
  DL_REQUIRE_PTR(out);
  *out = d->population.is_neutral(1e-3) ? 1 : 0;
  return DL_OK;
}

dl_status dl_parse_defect_spec(const char* spec, double* out_z, double* out_n) {
  DL_REQUIRE_PTR(spec);
  DL_REQUIRE_PTR(out_z);
  DL_REQUIRE_PTR(out_n);
  const std::string s(spec);
  const auto comma = s.find(',');
  if (comma == std::string::npos)
    return set_error(DL_ERR_PARSE, "defect spec '" + s + "': expected Z,N/cm3 or Z,N/m3");
  auto trimmed = [](std::string t) {
    const auto b = t.find_first_not_of(" \t");
    const auto e = t.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : t.substr(b, e - b + 1);
  };
  const std::string z_text = trimmed(s.substr(0, comma));
  std::string n_text = trimmed(s.substr(comma + 1));

  double scale = 0.0;
  for (const auto& [suffix, factor] :
       {std::pair<std::string_view, double>{"/cm3", dl::units::kPerCm3}, {"/cm^3", dl::units::kPerCm3},
        {"cm-3", dl::units::kPerCm3}, {"/m3", 1.0}, {"/m^3", 1.0}, {"m-3", 1.0}}) {
    if (n_text.size() > suffix.size() && n_text.ends_with(suffix)) {
      scale = factor;
      n_text = trimmed(n_text.substr(0, n_text.size() - suffix.size()));
      break;
    }
  }
  if (scale == 0.0)
    return set_error(DL_ERR_PARSE,
                     "defect spec '" + s + "': concentration needs a unit suffix (/cm3 or /m3)");
  double z = 0.0;
  double n = 0.0;
  try {
    std::size_t used_z = 0;
    std::size_t used_n = 0;
    z = std::stod(z_text, &used_z);
    n = std::stod(n_text, &used_n);
    if (used_z != z_text.size() || used_n != n_text.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    return set_error(DL_ERR_PARSE, "defect spec '" + s + "': not a number");
  }
  if (!std::isfinite(z) || !std::isfinite(n) || n < 0.0)
    return set_error(DL_ERR_INVALID_ARGUMENT, "defect spec '" + s + "': need finite Z and N >= 0");
  *out_z = z;
  *out_n = n * scale;
  return DL_OK;
}

dl_status dl_absorption_coefficient(const dl_defects* d, double a_c, double omega, double* out) {
  DL_REQUIRE_PTR(d);
  DL_REQUIRE_PTR(out);
  return guarded([&] {
    *out = dl::absorption_coefficient(d->population, a_c, omega);
    return DL_OK;
  });
}

dl_status dl_cross_section(double z_eff, double field_factor, double n_r, double mean_mass_kg,
                           double omega, double omega_m, double* out) {
  DL_REQUIRE_PTR(out);
  return guarded([&] {
    *out = dl::cross_section(z_eff, field_factor, n_r, mean_mass_kg, omega, omega_m);
    return DL_OK;
  });
}

dl_status dl_loss_tangent_direct(const dl_defects* d, double field_factor, double n_r,
                                 double mass_density, double sound_velocity, double omega,
                                 double* out) {
  DL_REQUIRE_PTR(d);
  DL_REQUIRE_PTR(out);
  return guarded([&] {
    *out = dl::loss_tangent_direct(d->population, field_factor, n_r, mass_density,
                                   sound_velocity, omega);
    return DL_OK;
  });
}

// -- hosts --

dl_derive_options dl_derive_options_default(void) {
  return {DL_LOCAL_FIELD_ONSAGER, DL_VELOCITY_TRANSVERSE, 0.0};
}

dl_status dl_host_create(const dl_host_params* p, dl_host** out) {
  DL_REQUIRE_PTR(p);
  DL_REQUIRE_PTR(out);
  DL_REQUIRE_PTR(p->formula);
  return guarded([&] {
    dl::HostMaterial host{
        .id = p->id ? p->id : "",
        .composition = dl::parse_formula(p->formula),
        .mass_density = p->mass_density,
        .site_density = p->site_density,
        .bulk_modulus = p->bulk_modulus,
        .shear_modulus = p->shear_modulus,
        .dielectric = to_tensor(p->dielectric),
        .band_gap_pbe = p->band_gap_pbe_ev,
        .space_group = p->space_group ? p->space_group : "",
        .centrosymmetric = p->centrosymmetric != 0,
        .magnetic = p->magnetic != 0,
    };
    return make_host(std::move(host), out);
  });
}

dl_status dl_host_from_record_json(const char* json_line, dl_host** out) {
  DL_REQUIRE_PTR(json_line);
  DL_REQUIRE_PTR(out);
  return guarded([&] {
    const auto rec = dl::parse_record(json_line, 1);
    return make_host(dl::to_host_material(rec), out);
  });
}

dl_status dl_host_load_record(const char* path, const char* id, dl_host** out) {
  DL_REQUIRE_PTR(path);
  DL_REQUIRE_PTR(out);
  return guarded([&] {
    const auto records = dl::read_records(std::filesystem::path(path));
    for (const auto& r : records) {
      if (id != nullptr && r.material_id != std::string(id)) continue;
      return make_host(dl::to_host_material(r), out);
    }
    return set_error(DL_ERR_NOT_FOUND, id ? std::string("no record with material_id '") + id +
                                                "' in " + path
                                          : std::string("no records in ") + path);
  });
}

void dl_host_destroy(dl_host* h) { delete h; }

dl_status dl_host_info_get(const dl_host* h, dl_host_info* out) {
  DL_REQUIRE_PTR(h);
  DL_REQUIRE_PTR(out);
  const auto& m = h->host;
  dl_host_info info{};
  info.id = m.id.c_str();
  info.formula = h->formula.c_str();
  info.space_group = m.space_group.c_str();
  info.mass_density = m.mass_density;
  info.site_density = m.site_density;
  info.bulk_modulus = m.bulk_modulus;
  info.shear_modulus = m.shear_modulus;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) info.dielectric[3 * i + j] = m.dielectric[i][j];
  info.band_gap_pbe_ev = m.band_gap_pbe;
  info.mean_mass_amu = dl::average_atomic_mass_amu(m.composition);
  info.centrosymmetric = m.centrosymmetric;
  info.magnetic = m.magnetic;
  *out = info;
  return DL_OK;
}

dl_status dl_host_derive(const dl_host* h, const dl_derive_options* opts, dl_host_derived* out) {
  DL_REQUIRE_PTR(h);
  DL_REQUIRE_PTR(out);
  return guarded([&] {
    const dl_derive_options o = opts ? *opts : dl_derive_options_default();
    const auto d = dl::derive_host(
        h->host, {to_model(o.local_field), to_velocity(o.velocity), o.fitted_velocity});
    *out = {d.v_t, d.v_l, d.v_s, d.omega_m, d.n_r, d.eps, d.field_factor, d.mean_mass, d.a_c};
    return DL_OK;
  });
}

dl_status dl_evaluate(const dl_host_derived* host, const dl_defects* d, double omega,
                      dl_loss_result* out) {
  DL_REQUIRE_PTR(host);
  DL_REQUIRE_PTR(d);
  DL_REQUIRE_PTR(out);
  return guarded([&] {
    dl::HostDerived h{host->v_t, host->v_l, host->v_s, host->omega_m, host->n_r,
                      host->eps, host->field_factor, host->mean_mass_kg, host->a_c};
    const auto r = dl::evaluate(h, d->population, omega);
    *out = {r.omega, r.sigma, r.a, r.tan_delta, r.t_star};
    return DL_OK;
  });
}

// -- spectral --

dl_status dl_spectrum_debye(double omega_m, dl_spectrum** out) {
  DL_REQUIRE_PTR(out);
  return guarded([&] {
    *out = new dl_spectrum{dl::SpectralDensity::debye(omega_m)};
    return DL_OK;
  });
}

dl_status dl_spectrum_from_dos(const double* omega, const double* rho, size_t n,
                               dl_interpolation interp, dl_spectrum** out) {
  DL_REQUIRE_PTR(omega);
  DL_REQUIRE_PTR(rho);
  DL_REQUIRE_PTR(out);
  return guarded([&] {
    *out = new dl_spectrum{
        dl::nu_from_dos(std::span(omega, n), std::span(rho, n), to_interp(interp))};
    return DL_OK;
  });
}

dl_status dl_spectrum_from_dos_file(const char* path, dl_interpolation interp, dl_spectrum** out) {
  DL_REQUIRE_PTR(path);
  DL_REQUIRE_PTR(out);
  return guarded([&] {
    const auto t = dl::read_dos_csv(path);
    *out = new dl_spectrum{dl::nu_from_dos(t.omega, t.rho, to_interp(interp))};
    return DL_OK;
  });
}

void dl_spectrum_destroy(dl_spectrum* s) { delete s; }

dl_status dl_spectrum_mu_max(const dl_spectrum* s, double* out) {
  DL_REQUIRE_PTR(s);
  DL_REQUIRE_PTR(out);
  *out = s->nu.mu_max();
  return DL_OK;
}

dl_status dl_spectrum_value(const dl_spectrum* s, double mu, double* out) {
  DL_REQUIRE_PTR(s);
  DL_REQUIRE_PTR(out);
  *out = s->nu(mu);
  return DL_OK;
}

dl_status dl_pv_integral(const dl_spectrum* s, double z, double* out) {
  DL_REQUIRE_PTR(s);
  DL_REQUIRE_PTR(out);
  return guarded([&] {
    *out = dl::pv_integral(s->nu, z);
    return DL_OK;
  });
}

dl_status dl_chi_squared(const dl_spectrum* s, double eps_mass, double n_atoms, double z,
                         double* out) {
  DL_REQUIRE_PTR(s);
  DL_REQUIRE_PTR(out);
  return guarded([&] {
    *out = dl::chi_squared({eps_mass, n_atoms, z}, s->nu);
    return DL_OK;
  });
}

dl_status dl_acoustic_limit(const dl_spectrum* s, double eps_mass, double n_atoms,
                            double* out_value, double* out_error) {
  DL_REQUIRE_PTR(s);
  DL_REQUIRE_PTR(out_value);
  DL_REQUIRE_PTR(out_error);
  return guarded([&] {
    const auto r = dl::acoustic_limit_check(s->nu, eps_mass, n_atoms);
    *out_value = r.value;
    *out_error = r.error;
    return DL_OK;
  });
}

dl_status dl_chi_sweep_write_csv(const dl_spectrum* s, double eps_mass, const double* z, size_t n,
                                 unsigned threads, const char* path) {
  DL_REQUIRE_PTR(s);
  if (n > 0) DL_REQUIRE_PTR(z);
  return guarded([&] {
    const auto rows = dl::chi_sweep(s->nu, eps_mass, std::span(z, n), threads);
    write_to(path, [&](std::ostream& o) { dl::write_chi_sweep_csv(o, rows); });
    return DL_OK;
  });
}

// -- screening --

dl_status dl_screen_config_create(dl_screen_config** out) {
  DL_REQUIRE_PTR(out);
  return guarded([&] {
    *out = new dl_screen_config{};
    return DL_OK;
  });
}

dl_status dl_screen_config_load(const char* path, dl_screen_config** out) {
  DL_REQUIRE_PTR(path);
  DL_REQUIRE_PTR(out);
  return guarded([&] {
    *out = new dl_screen_config{dl::load_screen_config(path)};
    return DL_OK;
  });
}

void dl_screen_config_destroy(dl_screen_config* c) { delete c; }

dl_status dl_screen_config_get(const dl_screen_config* c, dl_screen_config_values* out) {
  DL_REQUIRE_PTR(c);
  DL_REQUIRE_PTR(out);
  const auto& g = c->cfg;
  *out = {g.frequency_ghz,
          g.n_def_per_cm3,
          g.z_eff,
          from_model(g.local_field),
          from_velocity(g.velocity),
          g.gap_threshold_ev,
          g.magnetization_threshold_mu_b,
          g.dielectric == dl::DielectricSource::Electronic,
          g.threads};
  return DL_OK;
}

dl_status dl_screen_config_set(dl_screen_config* c, const dl_screen_config_values* v) {
  DL_REQUIRE_PTR(c);
  DL_REQUIRE_PTR(v);
  return guarded([&] {
    dl::require(std::isfinite(v->frequency_ghz) && v->frequency_ghz > 0.0, "frequency must be > 0");
    dl::require(std::isfinite(v->n_def_per_cm3) && v->n_def_per_cm3 >= 0.0, "N_def must be >= 0");
    dl::require(v->velocity != DL_VELOCITY_FITTED, "screening needs transverse or longitudinal velocity");
    dl::ScreenConfig g;
    g.frequency_ghz = v->frequency_ghz;
    g.n_def_per_cm3 = v->n_def_per_cm3;
    g.z_eff = v->z_eff;
    g.local_field = to_model(v->local_field);
    g.velocity = to_velocity(v->velocity);
    g.gap_threshold_ev = v->gap_threshold_ev;
    g.magnetization_threshold_mu_b = v->magnetization_threshold_mu_b;
    g.dielectric = v->dielectric_electronic ? dl::DielectricSource::Electronic : dl::DielectricSource::Total;
    g.threads = v->threads;
    c->cfg = g;
    return DL_OK;
  });
}

dl_status dl_overrides_load(const char* path, dl_overrides** out) {
  DL_REQUIRE_PTR(path);
  DL_REQUIRE_PTR(out);
  return guarded([&] {
    *out = new dl_overrides{dl::load_overrides(path)};
    return DL_OK;
  });
}

void dl_overrides_destroy(dl_overrides* o) { delete o; }

namespace {
dl_status run_screen(const std::vector<dl::RawRecord>& records, const dl_screen_config* cfg,
                     const dl_overrides* overrides, dl_screen_result** out) {
  const dl::ScreenConfig c = cfg ? cfg->cfg : dl::ScreenConfig{};
  static const dl::DefectOverrides kNone;
  *out = new dl_screen_result{dl::screen(records, c, overrides ? overrides->map : kNone)};
  return DL_OK;
}
}  // namespace

dl_status dl_screen_file(const char* db_path, const dl_screen_config* cfg,
                         const dl_overrides* overrides, dl_screen_result** out) {
  DL_REQUIRE_PTR(db_path);
  DL_REQUIRE_PTR(out);
  return guarded([&] {
    return run_screen(dl::read_records(std::filesystem::path(db_path)), cfg, overrides, out);
  });
}

dl_status dl_screen_text(const char* jsonl, const dl_screen_config* cfg,
                         const dl_overrides* overrides, dl_screen_result** out) {
  DL_REQUIRE_PTR(jsonl);
  DL_REQUIRE_PTR(out);
  return guarded([&] {
    std::istringstream in{std::string(jsonl)};
    return run_screen(dl::read_records(in), cfg, overrides, out);
  });
}

void dl_screen_result_destroy(dl_screen_result* r) { delete r; }

dl_status dl_screen_counts_get(const dl_screen_result* r, dl_screen_counts* out) {
  DL_REQUIRE_PTR(r);
  DL_REQUIRE_PTR(out);
  const auto s = r->result.summary();
  auto count = [&](dl::ExclusionReason k) {
    auto it = s.excluded.find(k);
    return it == s.excluded.end() ? std::size_t{0} : it->second;
  };
  *out = {s.total,
          s.included,
          count(dl::ExclusionReason::NoGap),
          count(dl::ExclusionReason::Magnetic),
          count(dl::ExclusionReason::MissingElastic),
          count(dl::ExclusionReason::MissingDielectric),
          count(dl::ExclusionReason::InvalidData)};
  return DL_OK;
}

dl_status dl_screen_row_get(const dl_screen_result* r, size_t index, dl_screen_row* out) {
  DL_REQUIRE_PTR(r);
  DL_REQUIRE_PTR(out);
  const auto& rows = r->result.included;
  if (index >= rows.size()) return set_error(DL_ERR_NOT_FOUND, "row index out of range");
  const auto& row = rows[index];
  const auto& v = *row.values;
  *out = {row.id.c_str(), row.formula.c_str(), row.space_group.c_str(), row.centrosymmetric,
          v.omega_m, v.n_r, v.a_c, v.tan_delta, v.e_g_corrected, v.mean_mass};
  return DL_OK;
}

dl_status dl_screen_write_table(const dl_screen_result* r, const char* path, dl_table_format format) {
  DL_REQUIRE_PTR(r);
  return guarded([&] {
    const auto f = format == DL_FORMAT_TEXT   ? dl::TableFormat::Text
                   : format == DL_FORMAT_JSON ? dl::TableFormat::Json
                                              : dl::TableFormat::Csv;
    write_to(path, [&](std::ostream& o) { dl::write_table(o, r->result.included, f); });
    return DL_OK;
  });
}

dl_status dl_screen_write_figures(const dl_screen_result* r, const char* debye_path,
                                  const char* gap_path) {
  DL_REQUIRE_PTR(r);
  DL_REQUIRE_PTR(debye_path);
  DL_REQUIRE_PTR(gap_path);
  return guarded([&] {
    write_to(debye_path, [&](std::ostream& o) { dl::write_debye_scatter(o, r->result.included); });
    write_to(gap_path, [&](std::ostream& o) { dl::write_gap_scatter(o, r->result.included); });
    return DL_OK;
  });
}

dl_status dl_screen_write_exclusions(const dl_screen_result* r, const char* path) {
  DL_REQUIRE_PTR(r);
  return guarded([&] {
    write_to(path, [&](std::ostream& o) { dl::write_exclusions(o, r->result.excluded); });
    return DL_OK;
  });
}

const char* dl_bundled_fixture(void) { return dl::assets::table1_fixture_jsonl.data(); }

}  // extern "C"
