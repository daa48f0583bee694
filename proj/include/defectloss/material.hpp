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

#include <array>
#include <string>
#include <vector>

#include "defectloss/composition.hpp"

namespace defectloss {

using Tensor3 = std::array<std::array<double, 3>, 3>;

/// Raw per-material inputs, SI units.
struct HostMaterial {
  std::string id;
  Composition composition;
  double mass_density = 0.0;   // kg/m^3
  double site_density = 0.0;   // atoms/m^3
  double bulk_modulus = 0.0;   // Pa
  double shear_modulus = 0.0;  // Pa
  Tensor3 dielectric{};        // static, dimensionless
  double band_gap_pbe = 0.0;   // eV
  std::string space_group;
  bool centrosymmetric = false;
  bool magnetic = false;
};

struct Violation {
  std::string field;
  std::string message;
};

/// Relative tolerance for the density vs. site-density x mean-mass check.
inline constexpr double kDensityConsistencyTolerance = 0.20;

/// Every record-level invariant of HostMaterial. An empty result means the
/// loss-physics chain can run on this record without domain errors.
std::vector<Violation> validate(const HostMaterial& host);

/// Eigenvalues of the symmetric part, ascending.
std::array<double, 3> symmetric_eigenvalues(const Tensor3& t);

struct DefectSpecies {
  double z_eff = 0.0;  // elementary charges, signed
  double n_def = 0.0;  // 1/m^3
};

class DefectPopulation {
 public:
  DefectPopulation() = default;
  explicit DefectPopulation(std::vector<DefectSpecies> species);

  void add(DefectSpecies s);

  const std::vector<DefectSpecies>& species() const noexcept { return species_; }
  bool empty() const noexcept { return species_.empty(); }

  /// Sum of N_def * Z_eff^2 (1/m^3).
  double weighted_charge_density() const noexcept;
  /// Sum of N_def (1/m^3).
  double total_density() const noexcept;
  /// Net charge density sum of N_def * Z_eff (e/m^3).
  double net_charge_density() const noexcept;
  /// |net charge| <= tol * sum |N Z|.
  bool is_neutral(double rel_tol = 1e-9) const noexcept;

 private:
  std::vector<DefectSpecies> species_;
};

}  // namespace defectloss
