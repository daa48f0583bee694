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

#include "defectloss/material.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "defectloss/error.hpp"

namespace defectloss {

std::array<double, 3> symmetric_eigenvalues(const Tensor3& t) {
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = 0.5 * (t[i][j] + t[j][i]);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(m, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev(0), ev(1), ev(2)};
}

std::vector<Violation> validate(const HostMaterial& host) {
  std::vector<Violation> out;
  auto check_positive = [&](double v, const char* field) {
    if (!(std::isfinite(v) && v > 0.0)) out.push_back({field, "must be finite and > 0"});
  };
  check_positive(host.mass_density, "mass_density");
  check_positive(host.site_density, "site_density");
  check_positive(host.bulk_modulus, "bulk_modulus");
  check_positive(host.shear_modulus, "shear_modulus");
  if (!(std::isfinite(host.band_gap_pbe) && host.band_gap_pbe >= 0.0))
    out.push_back({"band_gap_pbe", "must be finite and >= 0"});

  const auto& e = host.dielectric;
  bool finite = true;
  double scale = 0.0;
  for (const auto& row : e)
    for (double v : row) {
      finite = finite && std::isfinite(v);
      scale = std::max(scale, std::abs(v));
    }
  if (!finite) {
    out.push_back({"dielectric", "non-finite entry"});
  } else {
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        if (std::abs(e[i][j] - e[j][i]) > 1e-6 * scale)
          out.push_back({"dielectric", "not symmetric"});
    const auto ev = symmetric_eigenvalues(e);
    if (ev[0] < 1.0) out.push_back({"dielectric", "eigenvalue below 1"});
  }

  if (out.empty()) {
    const double expected = host.site_density * average_atomic_mass(host.composition);
    const double rel = std::abs(host.mass_density - expected) / expected;
    if (rel > kDensityConsistencyTolerance)
      out.push_back({"mass_density", "inconsistent with site density x mean atomic mass (" +
                                         std::to_string(100.0 * rel) + "% off)"});
  }
  return out;
}

DefectPopulation::DefectPopulation(std::vector<DefectSpecies> species) {
  for (auto s : species) add(s);
}

void DefectPopulation::add(DefectSpecies s) {
  require(std::isfinite(s.z_eff) && std::isfinite(s.n_def) && s.n_def >= 0.0,
          "defect species needs finite Z_eff and N_def >= 0");
  species_.push_back(s);
}

double DefectPopulation::weighted_charge_density() const noexcept {
  double sum = 0.0;
  for (const auto& s : species_) sum += s.n_def * s.z_eff * s.z_eff;
  return sum;
}

double DefectPopulation::total_density() const noexcept {
  double sum = 0.0;
  for (const auto& s : species_) sum += s.n_def;
  return sum;
}

double DefectPopulation::net_charge_density() const noexcept {
  double sum = 0.0;
  for (const auto& s : species_) sum += s.n_def * s.z_eff;
  return sum;
}

bool DefectPopulation::is_neutral(double rel_tol) const noexcept {
  double scale = 0.0;
  for (const auto& s : species_) scale += std::abs(s.n_def * s.z_eff);
  return std::abs(net_charge_density()) <= rel_tol * scale;
}

}  // namespace defectloss
