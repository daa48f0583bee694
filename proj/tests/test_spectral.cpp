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

#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "approx.hpp"

#include "defectloss/error.hpp"
#include "defectloss/spectral.hpp"

using namespace defectloss;
using defectloss::testing::Rel;

namespace {

constexpr double kOmegaM = 2.0 * 3.14159265358979323846 * 17.3e12;

double debye_pv_closed_form(double w, double z) {
  const double s = std::sqrt(z);
  return 3.0 / (w * w * w) * (w + 0.5 * s * std::log((w - s) / (w + s)));
}

// Rectangle-rule principal value with cells placed symmetrically around z on
// [0, 2z] so paired contributions cancel the pole, plain midpoints above.
double brute_force_pv(const SpectralDensity& nu, double z, long cells) {
  const double mu_max = nu.mu_max();
  const double lower = std::min(2.0 * z, mu_max);
  const long n_lower = std::max(2L, static_cast<long>(cells * (lower / mu_max)) / 2 * 2);
  const long n_upper = std::max(1L, cells - n_lower);
  long double sum = 0.0L;
  const double h1 = lower / n_lower;
  for (long k = 0; k < n_lower / 2; ++k) {
    const double d = (k + 0.5) * h1;
    sum += static_cast<long double>((nu(z + d) - nu(z - d)) / d) * h1;
  }
  const double h2 = (mu_max - lower) / n_upper;
  for (long k = 0; k < n_upper; ++k) {
    const double m = lower + (k + 0.5) * h2;
    sum += static_cast<long double>(nu(m) / (m - z)) * h2;
  }
  return static_cast<double>(sum);
}

double chi_from_pv(double eps, double z, double nu_z, double pv) {
  const double r = 3.14159265358979323846 * eps * z * nu_z;
  const double b = 1.0 + eps * z * pv;
  return 1.0 / (r * r + b * b);
}

// Composite Simpson in t = sqrt(mu), independent of the library quadrature.
double simpson_total(const SpectralDensity& nu, long n) {
  const double tb = std::sqrt(nu.mu_max());
  const double h = tb / n;
  auto g = [&](double t) { return 2.0 * t * nu(t * t); };
  double s = g(0.0) + g(tb);
  for (long i = 1; i < n; ++i) s += g(i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

DosTable realistic_dos(int points) {
  DosTable t;
  for (int i = 0; i <= points; ++i) {
    const double w = static_cast<double>(i) / points;
    const double bump = 1.0 + 2.0 * std::exp(-std::pow((w - 0.7) / 0.08, 2));
    t.omega.push_back(w * 3e13);
    t.rho.push_back(w * w * bump * std::sqrt(std::max(0.0, 1.0 - w * w)));
  }
  return t;
}

}  // namespace

TEST_CASE("Debye density") {
  const auto nu = SpectralDensity::debye(kOmegaM);
  CHECK(nu.mu_max() == kOmegaM * kOmegaM);
  CHECK(nu.is_debye());
  CHECK(nu.debye_omega() == kOmegaM);
  const double mu = 0.3 * nu.mu_max();
  CHECK(nu(mu) == Rel(1.5 * std::sqrt(mu) / std::pow(kOmegaM, 3)).epsilon(1e-15));
  CHECK(nu(-1.0) == 0.0);
  CHECK(nu(1.01 * nu.mu_max()) == 0.0);
  CHECK(simpson_total(nu, 200000) == Rel(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(SpectralDensity::debye(0.0), Error);
}

TEST_CASE("pv matches the Debye closed form") {
  const auto nu = SpectralDensity::debye(kOmegaM);
  const double mu_max = nu.mu_max();
  CHECK(pv_integral(nu, 0.25 * mu_max) * mu_max == Rel(3.0 * (1.0 + 0.25 * std::log(1.0 / 3.0))).epsilon(1e-10));
  CHECK(pv_integral(nu, 0.25 * mu_max) * mu_max == Rel(2.176).epsilon(2e-4));
  // Relative to the natural scale 1/mu_max so the zero crossing near z = 0.69 mu_max is not ill-posed.
  for (int i = 0; i < 50; ++i) {
    const double z = mu_max * (0.01 + 0.97 * i / 49.0);
    const double want = debye_pv_closed_form(kOmegaM, z);
    const double got = pv_integral(nu, z);
    INFO("z/mu_max = " << z / mu_max);
    CHECK(std::abs(got - want) <= 1e-8 * std::max(std::abs(want), 1.0 / mu_max));
  }
  // Outside the support the integral is ordinary.
  const double z_out = -0.5 * mu_max;
  const double s = std::sqrt(-z_out), w = kOmegaM;
  const double want_out = 3.0 / (w * w * w) * (w - s * std::atan(w / s));
  CHECK(pv_integral(nu, z_out) == Rel(want_out).epsilon(1e-10));
}

TEST_CASE("pv matches the uniform closed form") {
  const double mu_max = 4.0e26;
  std::vector<double> mu, v;
  for (int i = 1; i <= 200; ++i) {
    mu.push_back(mu_max * i / 200.0);
    v.push_back(7.0);
  }
  const auto nu = SpectralDensity::tabulated(mu, v, Interpolation::Linear, 0.0);
  CHECK(nu(0.5 * mu_max) == Rel(1.0 / mu_max).epsilon(1e-12));
  for (double f : {0.003, 0.1, 0.37, 0.5, 0.8, 0.99}) {
    const double z = f * mu_max;
    const double want = std::log((mu_max - z) / z) / mu_max;
    CHECK(std::abs(pv_integral(nu, z) - want) <= 1e-8 * std::max(std::abs(want), 1.0 / mu_max));
  }
}

TEST_CASE("chi squared against the brute-force oracle") {
  const auto nu = SpectralDensity::debye(kOmegaM);
  const double z = 0.25 * nu.mu_max();
  const double pv = brute_force_pv(nu, z, 10'000'000);
  CHECK(pv == Rel(pv_integral(nu, z)).epsilon(1e-6));
  const double oracle = chi_from_pv(0.5, z, nu(z), pv);
  CHECK(chi_squared({0.5, 1.0, z}, nu) == Rel(oracle).epsilon(1e-6));
  CHECK(chi_squared({0.5, 8.0, z}, nu) == Rel(oracle / 8.0).epsilon(1e-6));
}

TEST_CASE("chi squared basic properties") {
  const auto nu = SpectralDensity::debye(kOmegaM);
  const double mu_max = nu.mu_max();
  for (double f : {1e-8, 1e-3, 0.3, 0.9, 0.998}) {
    CHECK(chi_squared({0.0, 1.0, f * mu_max}, nu) == 1.0);
    CHECK(chi_squared({0.0, 4.0, f * mu_max}, nu) == 0.25);
  }
  for (double eps : {-5.0, -1.0, 0.1, 0.5, 0.9, 0.99})
    for (int i = 1; i < 200; ++i) {
      const double z = mu_max * i / 200.0 * 0.998;
      REQUIRE(chi_squared({eps, 1.0, z}, nu) > 0.0);
    }
  // Series oracle near z = 0: bracket 1 + 3 eps z / w^2 + O(z ln z).
  const double z = 1e-6 * mu_max;
  CHECK(chi_squared({0.5, 1.0, z}, nu) == Rel(1.0).epsilon(1e-4));
  CHECK(chi_squared({0.5, 1.0, z}, nu) == Rel(1.0 / std::pow(1.0 + 1.5e-6, 2)).epsilon(1e-7));

  CHECK_THROWS_AS(chi_squared({1.0, 1.0, 0.5 * mu_max}, nu), Error);
  CHECK_THROWS_AS(chi_squared({0.5, 0.5, 0.5 * mu_max}, nu), Error);
  CHECK_THROWS_AS(chi_squared({0.5, 1.0, 0.0}, nu), Error);
  CHECK_THROWS_AS(chi_squared({0.5, 1.0, mu_max}, nu), Error);
  CHECK_THROWS_AS(pv_integral(nu, 0.0), Error);
  CHECK_THROWS_AS(pv_integral(nu, mu_max), Error);
  CHECK_THROWS_AS(pv_integral(nu, 0.9995 * mu_max), Error);
}

TEST_CASE("chi squared is continuous in z") {
  const auto nu = SpectralDensity::debye(kOmegaM);
  const double mu_max = nu.mu_max();
  const double h = 1e-3 * mu_max;
  std::vector<double> c;
  for (int i = 10; i <= 950; ++i) c.push_back(chi_squared({0.5, 1.0, i * h}, nu));
  // Cubic prediction from four neighbours; quadrature jumps would show up here.
  for (std::size_t i = 2; i + 2 < c.size(); ++i) {
    const double pred = (-c[i - 2] + 4.0 * c[i - 1] + 4.0 * c[i + 1] - c[i + 2]) / 6.0;
    INFO("i = " << i);
    REQUIRE(std::abs(c[i] - pred) <= 1e-6 * c[i]);
  }
}

TEST_CASE("acoustic limit for Debye density") {
  const auto nu = SpectralDensity::debye(kOmegaM);
  for (double eps : {-1.0, 0.1, 0.5, 0.9}) {
    const auto lim = acoustic_limit_check(nu, eps, 1.0);
    CHECK(lim.value == Rel(1.0).epsilon(1e-4));
    CHECK(lim.error < 1e-4);
  }
  const auto exact = acoustic_limit_check(nu, 0.0, 3.0);
  CHECK(exact.value == 1.0);
  CHECK(exact.error == 0.0);
}

TEST_CASE("nu_from_dos transforms") {
  SUBCASE("Debye") {
    std::vector<double> w, rho;
    for (int i = 0; i <= 400; ++i) {
      const double x = kOmegaM * i / 400.0;
      w.push_back(x);
      rho.push_back(3.0 * x * x / std::pow(kOmegaM, 3));
    }
    const auto nu = nu_from_dos(w, rho);
    CHECK(nu.mu_max() == Rel(kOmegaM * kOmegaM).epsilon(1e-15));
    for (double f : {1e-6, 1e-4, 0.013, 0.2, 0.5, 0.77, 0.99}) {
      const double mu = f * nu.mu_max();
      CHECK(nu(mu) == Rel(1.5 * std::sqrt(mu) / std::pow(kOmegaM, 3)).epsilon(1e-5));
    }
    CHECK(simpson_total(nu, 400000) == Rel(1.0).epsilon(1e-6));
    CHECK(acoustic_limit_check(nu, 0.5).value == Rel(1.0).epsilon(1e-3));
  }
  SUBCASE("uniform") {
    const double wmax = 5e13;
    std::vector<double> w, rho;
    for (int i = 0; i <= 2000; ++i) {
      w.push_back(wmax * i / 2000.0);
      rho.push_back(1.0 / wmax);
    }
    const auto nu = nu_from_dos(w, rho);
    for (double f : {1e-9, 1e-7, 0.01, 0.3, 0.9}) {
      const double mu = f * wmax * wmax;
      CHECK(nu(mu) == Rel(1.0 / (2.0 * wmax * std::sqrt(mu))).epsilon(1e-4));
    }
    CHECK(simpson_total(nu, 400000) == Rel(1.0).epsilon(1e-6));
  }
  SUBCASE("unnormalized input is renormalized") {
    const auto dos = realistic_dos(400);
    for (auto interp : {Interpolation::MonotoneCubic, Interpolation::Linear}) {
      const auto nu = nu_from_dos(dos.omega, dos.rho, interp);
      CHECK(nu.integral() == Rel(1.0).epsilon(1e-9));
      CHECK(simpson_total(nu, 2'000'000) == Rel(1.0).epsilon(1e-6));
    }
  }
  SUBCASE("errors") {
    std::vector<double> w{0.0, 1.0, 2.0, 3.0, 4.0};
    std::vector<double> bad{0.0, 1.0, std::pow(2.0, -1.5), std::pow(3.0, -1.5), std::pow(4.0, -1.5)};
    CHECK_THROWS_AS(nu_from_dos(w, bad), Error);
    std::vector<double> neg{0.0, 1.0, -1.0, 1.0, 1.0};
    CHECK_THROWS_AS(nu_from_dos(w, neg), Error);
    CHECK_THROWS_AS(nu_from_dos(w, std::vector<double>{1.0, 2.0}), Error);
    CHECK_THROWS_AS(nu_from_dos(std::vector<double>{0.0, 1.0}, std::vector<double>{0.0, 1.0}), Error);
    CHECK_THROWS_AS(SpectralDensity::tabulated({2.0, 1.0, 3.0, 4.0}, {1, 1, 1, 1}), Error);
    CHECK_THROWS_AS(SpectralDensity::tabulated({0.0, 1.0, 2.0, 3.0}, {1, 1, 1, 1}), Error);
  }
}

TEST_CASE("acoustic limit is insensitive to high-frequency structure") {
  const auto dos = realistic_dos(600);
  const auto nu = nu_from_dos(dos.omega, dos.rho);
  for (double eps : {-1.0, 0.5, 0.9}) {
    const auto lim = acoustic_limit_check(nu, eps);
    CHECK(lim.value == Rel(1.0).epsilon(1e-3));
  }
}

TEST_CASE("sweep is ordered and thread-count independent") {
  const auto nu = SpectralDensity::debye(kOmegaM);
  std::vector<double> z;
  for (int i = 1; i <= 300; ++i) z.push_back(nu.mu_max() * i / 301.0 * 0.99);
  const auto a = chi_sweep(nu, 0.5, z, 1);
  const auto b = chi_sweep(nu, 0.5, z, 4);
  REQUIRE(a.size() == z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    REQUIRE(a[i].z == z[i]);
    REQUIRE(a[i].chi2_times_na == b[i].chi2_times_na);
    REQUIRE(a[i].pv_value == b[i].pv_value);
  }
  std::ostringstream out;
  write_chi_sweep_csv(out, std::span(a).first(2));
  std::istringstream lines(out.str());
  std::string header;
  std::getline(lines, header);
  CHECK(header == "z,chi2_times_Na,pv_value");
}

TEST_CASE("DOS CSV parsing") {
  std::istringstream ok("# comment\nomega_rad_per_s,rho_per_rad_per_s\n0,0\n1e13,2.5e-14\r\n2e13,1e-13\n");
  const auto t = parse_dos_csv(ok);
  REQUIRE(t.omega.size() == 3);
  CHECK(t.omega[2] == 2e13);
  CHECK(t.rho[1] == 2.5e-14);
  std::istringstream bad("omega,rho\n1,abc\n");
  CHECK_THROWS_AS(parse_dos_csv(bad), Error);
  std::istringstream one_col("1\n");
  CHECK_THROWS_AS(parse_dos_csv(one_col), Error);
  CHECK_THROWS_AS(read_dos_csv("/nonexistent/dos.csv"), Error);
}
