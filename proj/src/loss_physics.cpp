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

#include "defectloss/loss_physics.hpp"

#include <cmath>
#include <numeric>

#include "defectloss/constants.hpp"
#include "defectloss/error.hpp"
#include "defectloss/spectral.hpp"

namespace defectloss {

namespace {
constexpr const auto& K = kCodata2018;

void require_positive(double v, const char* what) {
  require(std::isfinite(v) && v > 0.0, std::string(what) + " must be finite and > 0");
}
}  // namespace

std::optional<LocalFieldModel> parse_local_field_model(std::string_view s) {
  if (s == "onsager") return LocalFieldModel::Onsager;
  if (s == "lorentz" || s == "lorentz-lorenz" || s == "lorentz_lorenz")
    return LocalFieldModel::LorentzLorenz;
  if (s == "unity" || s == "none") return LocalFieldModel::Unity;
  return std::nullopt;
}

std::string_view to_string(LocalFieldModel m) {
  switch (m) {
    case LocalFieldModel::Onsager: return "onsager";
    case LocalFieldModel::LorentzLorenz: return "lorentz";
    case LocalFieldModel::Unity: return "unity";
  }
  return "?";
}

std::optional<VelocityChoice> parse_velocity_choice(std::string_view s) {
  if (s == "transverse") return VelocityChoice::Transverse;
  if (s == "longitudinal") return VelocityChoice::Longitudinal;
  if (s == "fitted") return VelocityChoice::Fitted;
  return std::nullopt;
}

std::string_view to_string(VelocityChoice v) {
  switch (v) {
    case VelocityChoice::Transverse: return "transverse";
    case VelocityChoice::Longitudinal: return "longitudinal";
    case VelocityChoice::Fitted: return "fitted";
  }
  return "?";
}

SoundVelocities sound_velocities(double bulk_modulus, double shear_modulus,
                                 double mass_density) {
  require_positive(bulk_modulus, "bulk modulus");
  require_positive(shear_modulus, "shear modulus");
  require_positive(mass_density, "mass density");
  return {std::sqrt(shear_modulus / mass_density),
          std::sqrt((bulk_modulus + 4.0 * shear_modulus / 3.0) / mass_density)};
}

double debye_frequency(double site_density, double sound_velocity) {
  require_positive(site_density, "site density");
  require_positive(sound_velocity, "sound velocity");
  return std::cbrt(6.0 * kPi * kPi * site_density) * sound_velocity;
}

double refractive_index(const Tensor3& dielectric) {
  const double trace = dielectric[0][0] + dielectric[1][1] + dielectric[2][2];
  require(std::isfinite(trace) && trace >= 3.0,
          "dielectric tensor trace below 3 (permittivity below vacuum)");
  return std::sqrt(trace / 3.0);
}

double local_field_factor(double eps, LocalFieldModel model) {
  require(std::isfinite(eps) && eps >= 1.0, "scalar permittivity must be >= 1");
  switch (model) {
    case LocalFieldModel::Onsager: return 3.0 * eps / (2.0 * eps + 1.0);
    case LocalFieldModel::LorentzLorenz: return (eps + 2.0) / 3.0;
    case LocalFieldModel::Unity: return 1.0;
  }
  return 1.0;
}

double characteristic_parameter(double n_r, double mean_mass, double omega_m,
                                double field_factor) {
  require_positive(n_r, "refractive index");
  require_positive(mean_mass, "mean atomic mass");
  require_positive(omega_m, "Debye frequency");
  require_positive(field_factor, "local-field factor");
  const double host = 6.0 * kPi * kPi * K.alpha / n_r * (K.hbar / mean_mass) /
                      (omega_m * omega_m * omega_m);
  return field_factor * std::sqrt(host);
}

double absorption_coefficient(const DefectPopulation& defects, double a_c, double omega) {
  require(std::isfinite(omega) && omega >= 0.0, "frequency must be >= 0");
  return defects.weighted_charge_density() * a_c * a_c * omega * omega;
}

double cross_section(double z_eff, double field_factor, double n_r, double mean_mass,
                     double omega, double omega_m) {
  require(std::isfinite(omega) && omega >= 0.0, "frequency must be >= 0");
  require_positive(n_r, "refractive index");
  require_positive(mean_mass, "mean atomic mass");
  require_positive(omega_m, "Debye frequency");
  if (omega > omega_m) return 0.0;
  const double debye_dos = 3.0 * omega * omega / (omega_m * omega_m * omega_m);
  // Sum over 3 N_a modes with |chi_j|^2 = (1/3) / N_a in the acoustic limit;
  // the N_a cancel and the mode weight per atom is 3 x 1/3.
  const double mode_weight = kModesPerAtom * kPolarizationProjection;
  return z_eff * z_eff * field_factor * field_factor * (4.0 * kPi * kPi * K.alpha / n_r) *
         (K.hbar / (2.0 * mean_mass)) * mode_weight * debye_dos;
}

double loss_tangent(double a, double n_r, double omega) {
  require(std::isfinite(omega) && omega > 0.0, "loss tangent undefined at omega = 0");
  require_positive(n_r, "refractive index");
  return K.c / (n_r * omega) * a;
}

double loss_tangent_direct(const DefectPopulation& defects, double field_factor,
                           double n_r, double mass_density, double sound_velocity,
                           double omega) {
  require(std::isfinite(omega) && omega > 0.0, "loss tangent undefined at omega = 0");
  require_positive(field_factor, "local-field factor");
  require_positive(n_r, "refractive index");
  require_positive(mass_density, "mass density");
  require_positive(sound_velocity, "sound velocity");
  const double v3 = sound_velocity * sound_velocity * sound_velocity;
  return 1.0 / (4.0 * kPi * K.eps0 * n_r * n_r) * field_factor * field_factor *
         defects.weighted_charge_density() * K.e * K.e / (mass_density * v3) * omega;
}

double attenuate(double intensity0, double a, double z) {
  require(intensity0 >= 0.0 && z >= 0.0, "intensity and depth must be >= 0");
  return intensity0 * std::exp(-a * z);
}

double temperature_bound(double omega) {
  require(std::isfinite(omega) && omega >= 0.0, "frequency must be >= 0");
  return K.hbar * omega / K.kB;
}

HostDerived derive_host(const HostMaterial& host, const DeriveOptions& opts) {
  if (const auto violations = validate(host); !violations.empty()) {
    std::string msg = "invalid host '" + host.id + "':";
    for (const auto& v : violations) msg += " " + v.field + " " + v.message + ";";
    fail(ErrorKind::InvalidArgument, msg);
  }
  HostDerived d;
  const auto v = sound_velocities(host.bulk_modulus, host.shear_modulus, host.mass_density);
  d.v_t = v.transverse;
  d.v_l = v.longitudinal;
  switch (opts.velocity) {
    case VelocityChoice::Transverse: d.v_s = d.v_t; break;
    case VelocityChoice::Longitudinal: d.v_s = d.v_l; break;
    case VelocityChoice::Fitted:
      require_positive(opts.fitted_velocity, "fitted sound velocity");
      d.v_s = opts.fitted_velocity;
      break;
  }
  d.omega_m = debye_frequency(host.site_density, d.v_s);
  d.n_r = refractive_index(host.dielectric);
  d.eps = d.n_r * d.n_r;
  d.field_factor = local_field_factor(d.eps, opts.local_field);
  d.mean_mass = average_atomic_mass(host.composition);
  d.a_c = characteristic_parameter(d.n_r, d.mean_mass, d.omega_m, d.field_factor);
  return d;
}

LossResult evaluate(const HostDerived& host, const DefectPopulation& defects, double omega) {
  LossResult r;
  r.omega = omega;
  r.a = absorption_coefficient(defects, host.a_c, omega);
  r.tan_delta = loss_tangent(r.a, host.n_r, omega);
  const double n_total = defects.total_density();
  if (n_total > 0.0) {
    double weighted = 0.0;
    for (const auto& s : defects.species())
      weighted += s.n_def * cross_section(s.z_eff, host.field_factor, host.n_r,
                                          host.mean_mass, omega, host.omega_m);
    r.sigma = weighted / n_total;
  }
  r.t_star = temperature_bound(omega);
  return r;
}

}  // namespace defectloss
