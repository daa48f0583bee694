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

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

namespace defectloss {

/// Three phonon branches per atom.
inline constexpr double kModesPerAtom = 3.0;

/// Projection of the defect displacement onto the field polarization. The
/// mass-defect expansion gives N_a |chi_j|^2 -> 1 per Cartesian component as
/// z -> 0; one component is along the field, so the low-frequency weight per
/// mode entering the cross section is 1/3 of that.
inline constexpr double kPolarizationProjection = 1.0 / 3.0;

enum class Interpolation { MonotoneCubic, Linear };

/// Phonon density of states per squared unit frequency, nu(mu) with mu =
/// omega^2, normalized to unit integral over [0, mu_max].
class SpectralDensity {
 public:
  /// nu(mu) = 3 sqrt(mu) / (2 omega_m^3) on [0, omega_m^2].
  static SpectralDensity debye(double omega_m);

  /// Tabulated nu on strictly increasing knots mu[0] > 0. Below the first
  /// knot nu follows nu[0] (mu/mu[0])^low_power; above the last it is zero.
  /// Values are rescaled so the total integral is one.
  static SpectralDensity tabulated(std::vector<double> mu, std::vector<double> nu,
                                   Interpolation interp = Interpolation::MonotoneCubic,
                                   double low_power = 0.5);

  double operator()(double mu) const;
  double mu_max() const noexcept;
  bool is_debye() const noexcept;
  /// omega_m for the analytic Debye form, 0 otherwise.
  double debye_omega() const noexcept;

  /// Quadrature breakpoints in (0, mu_max): the tabulation knots.
  std::span<const double> knots() const noexcept;

  /// Integral of nu over its support, evaluated piecewise.
  double integral() const;

  SpectralDensity(const SpectralDensity&);
  SpectralDensity(SpectralDensity&&) noexcept;
  SpectralDensity& operator=(const SpectralDensity&);
  SpectralDensity& operator=(SpectralDensity&&) noexcept;
  ~SpectralDensity();

 private:
  struct Impl;
  explicit SpectralDensity(std::unique_ptr<Impl> impl);
  std::unique_ptr<Impl> impl_;
};

/// nu(omega^2) = rho(omega) / (2 omega) from a DOS tabulated per unit angular
/// frequency. Rows with omega = 0 are dropped; the low end follows the power
/// law fitted to the first two positive rows. Throws if that power makes nu
/// non-integrable at zero (rho ~ omega^p with p <= -1).
SpectralDensity nu_from_dos(std::span<const double> omega, std::span<const double> rho,
                            Interpolation interp = Interpolation::MonotoneCubic);

/// Fraction of mu_max within which z is rejected at the upper support edge.
inline constexpr double kUpperEdgeExclusion = 1e-3;

/// Principal value of the integral of nu(mu)/(mu - z) over the support.
/// Interior z uses singularity subtraction with an analytic log term; z
/// outside [0, mu_max] is an ordinary integral. z == 0, z == mu_max and z
/// within kUpperEdgeExclusion * mu_max below mu_max are rejected.
double pv_integral(const SpectralDensity& nu, double z);

struct MassDefectParams {
  double eps_mass = 0.0;  // (M - M') / M, must be < 1
  double n_atoms = 1.0;   // >= 1
  double z = 0.0;         // omega_j^2, rad^2/s^2
};

/// Expansion weight |chi_j|^2 of the defect displacement on mode j in the
/// monatomic-cubic mass-defect model.
double chi_squared(const MassDefectParams& p, const SpectralDensity& nu);

struct AcousticLimit {
  double value;  // limit of N_a |chi_j|^2 as z -> 0
  double error;  // estimated from the last two extrapolation levels
};

/// Richardson extrapolation of N_a |chi_j|^2 over z = mu_max 10^-k, k = 4..8.
/// Throws Error(Numerical) if the estimated error exceeds 1e-3.
AcousticLimit acoustic_limit_check(const SpectralDensity& nu, double eps_mass,
                                   double n_atoms = 1.0);

struct ChiSample {
  double z;
  double chi2_times_na;
  double pv_value;
};

/// Evaluates each z independently; results are in input order regardless of
/// thread count (0 = hardware concurrency).
std::vector<ChiSample> chi_sweep(const SpectralDensity& nu, double eps_mass,
                                 std::span<const double> z, unsigned threads = 1);

struct DosTable {
  std::vector<double> omega;
  std::vector<double> rho;
};

/// Two-column CSV with header omega_rad_per_s,rho_per_rad_per_s.
DosTable read_dos_csv(const std::filesystem::path& path);
DosTable parse_dos_csv(std::istream& in);

/// Header z,chi2_times_Na,pv_value; 11 significant digits.
void write_chi_sweep_csv(std::ostream& out, std::span<const ChiSample> rows);

}  // namespace defectloss
