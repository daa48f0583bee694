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

#pragma once

#include <optional>
#include <string_view>

#include "defectloss/material.hpp"

namespace defectloss {

enum class LocalFieldModel { Onsager, LorentzLorenz, Unity };

/// Which sound velocity sets the Debye cutoff.
enum class VelocityChoice { Transverse, Longitudinal, Fitted };

std::optional<LocalFieldModel> parse_local_field_model(std::string_view s);
std::string_view to_string(LocalFieldModel m);
std::optional<VelocityChoice> parse_velocity_choice(std::string_view s);
std::string_view to_string(VelocityChoice v);

struct SoundVelocities {
  double transverse;    // m/s
  double longitudinal;  // m/s
};

struct HostDerived {
  double v_t = 0.0;           // m/s
  double v_l = 0.0;           // m/s
  double v_s = 0.0;           // velocity used for the Debye cutoff, m/s
  double omega_m = 0.0;       // rad/s
  double n_r = 0.0;
  double eps = 0.0;           // n_r^2
  double field_factor = 0.0;  // E_eff / E_0
  double mean_mass = 0.0;     // kg
  double a_c = 0.0;           // m s
};

struct LossResult {
  double omega = 0.0;      // rad/s
  double sigma = 0.0;      // density-weighted mean cross section per defect, m^2
  double a = 0.0;          // 1/m
  double tan_delta = 0.0;
  double t_star = 0.0;     // K
};

struct DeriveOptions {
  LocalFieldModel local_field = LocalFieldModel::Onsager;
  VelocityChoice velocity = VelocityChoice::Transverse;
  double fitted_velocity = 0.0;  // m/s, only for VelocityChoice::Fitted
};

// -- single-step relations --------------------------------------------------

/// v_t = sqrt(G/rho), v_l = sqrt((K + 4G/3)/rho).
SoundVelocities sound_velocities(double bulk_modulus, double shear_modulus,
                                 double mass_density);

/// Debye cutoff (6 pi^2 N_s)^(1/3) v_s in rad/s.
double debye_frequency(double site_density, double sound_velocity);

/// sqrt(Tr(eps)/3). Throws if the trace is below 3.
double refractive_index(const Tensor3& dielectric);

/// E_eff/E_0 for scalar permittivity eps >= 1.
double local_field_factor(double eps, LocalFieldModel model);

/// Host-only absement A_c such that a(omega) = N Z^2 A_c^2 omega^2.
double characteristic_parameter(double n_r, double mean_mass, double omega_m,
                                double field_factor);

/// a = (sum N Z^2) A_c^2 omega^2.
double absorption_coefficient(const DefectPopulation& defects, double a_c,
                              double omega);

/// Per-defect cross section from the golden-rule result with the Debye
/// density of states. Zero above omega_m.
double cross_section(double z_eff, double field_factor, double n_r,
                     double mean_mass, double omega, double omega_m);

/// tan(delta) = c a / (n_r omega). Throws for omega <= 0.
double loss_tangent(double a, double n_r, double omega);

/// Closed form in terms of mass density and sound velocity. Equals
/// loss_tangent(absorption_coefficient(...)) when rho = M N_s and the same
/// v_s fixes omega_m.
double loss_tangent_direct(const DefectPopulation& defects, double field_factor,
                           double n_r, double mass_density,
                           double sound_velocity, double omega);

/// I0 exp(-a z).
double attenuate(double intensity0, double a, double z);

/// T* = hbar omega / k_B.
double temperature_bound(double omega);

// -- composed ----------------------------------------------------------------

/// Throws Error(InvalidArgument) listing violations if host fails validate().
HostDerived derive_host(const HostMaterial& host, const DeriveOptions& opts = {});

LossResult evaluate(const HostDerived& host, const DefectPopulation& defects,
                    double omega);

}  // namespace defectloss
