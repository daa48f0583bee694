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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "defectloss/composition.hpp"
#include "defectloss/constants.hpp"
#include "defectloss/loss_physics.hpp"
#include "defectloss/screening.hpp"
#include "defectloss/spectral.hpp"
#include "synthetic.hpp"
#include "table1.hpp"

using namespace defectloss;
using defectloss::testing::kTable1;
using defectloss::testing::rel_err;

namespace {

using Clock = std::chrono::steady_clock;

int g_failures = 0;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(const char* id, bool pass, const std::string& what) {
  std::printf("%-5s %s  %s\n", id, pass ? "PASS" : "FAIL", what.c_str());
  if (!pass) ++g_failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const std::filesystem::path kFixture = std::filesystem::path(DEFECTLOSS_DATA_DIR) / "table1_fixture.jsonl";

HostMaterial fixture_host(std::string_view id) {
  for (const auto& r : read_records(kFixture))
    if (r.material_id == id) return to_host_material(r);
  throw std::runtime_error("fixture record missing");
}

void ac1() {
  const auto t0 = Clock::now();
  const auto res = screen(read_records(kFixture), ScreenConfig{});
  double worst = 0.0;
  std::string worst_at = "-";
  std::size_t matched = 0;
  for (const auto& want : kTable1) {
    const auto it = std::find_if(res.included.begin(), res.included.end(),
                                 [&](const ScreeningRow& r) { return r.formula == want.formula; });
    if (it == res.included.end()) continue;
    ++matched;
    const auto& v = *it->values;
    const std::pair<const char*, double> errs[] = {{"omega_m", rel_err(v.omega_m_thz(), want.omega_m_thz)},
                                                   {"n_r", rel_err(v.n_r, want.n_r)},
                                                   {"a_c", rel_err(v.a_c, want.a_c)},
                                                   {"tan_delta", rel_err(v.tan_delta, want.tan_delta)}};
    for (auto [col, e] : errs)
      if (e > worst) {
        worst = e;
        worst_at = std::string(want.formula) + " " + col;
      }
  }
  const double dt = seconds_since(t0);
  report("AC1", matched == kTable1.size() && worst <= 0.05 && dt < 1.0,
         fmt("table regression: %zu/%zu rows, max rel err %.3e at %s (tol 5e-2), %.3f s (limit 1 s)",
             matched, kTable1.size(), worst, worst_at.c_str(), dt));
}

void ac2() {
  const auto d = derive_host(fixture_host("t1-Al2O3"));
  DefectPopulation pop;
  pop.add({+1.0, 1e18 * units::kPerCm3});
  pop.add({-3.0, 1e18 / 3.0 * units::kPerCm3});
  const double t = evaluate(d, pop, units::angular_from_ghz(4.5)).tan_delta;
  const double e = rel_err(t, 7.2e-9);
  report("AC2", e <= 0.03, fmt("Al2O3 composite: tan_delta %.4e vs 7.2e-9, rel err %.3e (tol 3e-2)", t, e));
}

void ac3() {
  const double ons = std::pow(local_field_factor(9.73, LocalFieldModel::Onsager), 2);
  const double ll = std::pow(local_field_factor(9.73, LocalFieldModel::LorentzLorenz), 2);
  const double e1 = rel_err(ons, 2.04), e2 = rel_err(ll, 15.3);
  report("AC3", e1 <= 5e-3 && e2 <= 5e-3,
         fmt("local-field factors at eps 9.73: Onsager^2 %.4f (err %.2e), Lorentz-Lorenz^2 %.4f (err %.2e), tol 5e-3",
             ons, e1, ll, e2));
}

void ac4() {
  const double mk = temperature_bound(units::angular_from_ghz(4.0)) * 1e3;
  report("AC4", std::abs(mk - 192.0) <= 1.0, fmt("temperature bound at 4 GHz: %.3f mK vs 192 +- 1 mK", mk));
}

void ac5() {
  const auto t0 = Clock::now();
  static const char* formulas[] = {"C", "Si", "Al2O3", "MgO", "GaN", "KBr", "LiF", "SiO2", "ZnO", "Si3N4"};
  std::mt19937_64 rng(20240505);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  int compared = 0;
  for (int i = 0; i < 10000; ++i) {
    HostMaterial h{.composition = parse_formula(formulas[i % std::size(formulas)])};
    h.id = "rnd";
    h.site_density = std::pow(10.0, 28.0 + 1.2 * u(rng));
    h.mass_density = h.site_density * average_atomic_mass(h.composition);
    h.shear_modulus = std::pow(10.0, 9.5 + 2.5 * u(rng));
    h.bulk_modulus = std::pow(10.0, 9.5 + 2.5 * u(rng));
    for (int k = 0; k < 3; ++k) h.dielectric[k][k] = 1.0 + 30.0 * u(rng);
    DefectPopulation pop;
    const int n = 1 + static_cast<int>(3 * u(rng));
    for (int k = 0; k < n; ++k) pop.add({std::round(-4.0 + 8.0 * u(rng)), std::pow(10.0, 20.0 + 6.0 * u(rng))});
    const auto d = derive_host(h, {static_cast<LocalFieldModel>(i % 3), VelocityChoice::Transverse});
    const double omega = units::angular_from_ghz(0.1 + 19.9 * u(rng));
    const double via_a = evaluate(d, pop, omega).tan_delta;
    const double direct = loss_tangent_direct(pop, d.field_factor, d.n_r, h.mass_density, d.v_s, omega);
    if (pop.weighted_charge_density() == 0.0) {
      if (via_a != 0.0 || direct != 0.0) worst = INFINITY;
      continue;
    }
    ++compared;
    worst = std::max(worst, std::abs(via_a / direct - 1.0));
  }
  const double dt = seconds_since(t0);
  report("AC5", worst <= 1e-10 && dt < 5.0,
         fmt("route equivalence: %d random hosts, max rel diff %.3e (tol 1e-10), %.3f s (limit 5 s)", compared,
             worst, dt));
}

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

void ac6() {
  const auto t0 = Clock::now();
  const double w = 2.0 * kPi * 17.3e12;
  const auto nu = SpectralDensity::debye(w);
  const double mu_max = nu.mu_max();
  // The Debye PV changes sign near z = 0.694 mu_max; points sit on a grid
  // that stays clear of that root so the relative error is well defined.
  double worst_closed = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double f = 0.01 + 0.95 * (i + 0.5) / 50.0;
    const double z = f * mu_max;
    const double s = std::sqrt(z);
    const double want = 3.0 / (w * w * w) * (w + 0.5 * s * std::log((w - s) / (w + s)));
    worst_closed = std::max(worst_closed, rel_err(pv_integral(nu, z), want));
  }
  const double z = 0.25 * mu_max;
  const double pv = brute_force_pv(nu, z, 10'000'000);
  const double r = kPi * 0.5 * z * nu(z);
  const double b = 1.0 + 0.5 * z * pv;
  const double oracle = 1.0 / (r * r + b * b);
  const double chi_err = rel_err(chi_squared({0.5, 1.0, z}, nu), oracle);
  const double dt = seconds_since(t0);
  report("AC6", worst_closed <= 1e-8 && chi_err <= 1e-6 && dt < 30.0,
         fmt("PV quadrature: closed form max rel err %.3e over 50 z (tol 1e-8); brute-force chi^2 rel err %.3e "
             "(tol 1e-6); %.3f s (limit 30 s)",
             worst_closed, chi_err, dt));
}

void ac7() {
  const auto nu = SpectralDensity::debye(2.0 * kPi * 17.3e12);
  double worst = 0.0;
  for (double eps : {-1.0, 0.1, 0.5, 0.9})
    worst = std::max(worst, std::abs(acoustic_limit_check(nu, eps).value - 1.0));
  report("AC7", worst <= 1e-4,
         fmt("acoustic limit for eps_m in {-1, 0.1, 0.5, 0.9}: max |N_a chi^2 - 1| %.3e (tol 1e-4)", worst));
}

std::string render(const ScreenResult& res) {
  std::ostringstream out;
  write_table(out, res.included);
  write_debye_scatter(out, res.included);
  write_gap_scatter(out, res.included);
  write_exclusions(out, res.excluded);
  return out.str();
}

void ac8() {
  std::istringstream db(defectloss::testing::synthetic_database(100000, 8));
  const auto records = read_records(db);
  const auto t0 = Clock::now();
  ScreenConfig serial;
  serial.threads = 1;
  ScreenConfig parallel;
  parallel.threads = 0;
  ScreenConfig oversubscribed;
  oversubscribed.threads = 8;
  const std::string a = render(screen(records, serial));
  const std::string b = render(screen(records, parallel));
  const std::string c = render(screen(records, oversubscribed));
  const double dt = seconds_since(t0);
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const bool same = a == b && a == c;
  report("AC8", same && dt < 10.0,
         fmt("determinism: %zu records, 1 vs %u (all cores) vs 8 threads, outputs %s (%zu bytes), %.3f s "
             "(limit 10 s)",
             records.size(), hw, same ? "byte-identical" : "DIFFER", a.size(), dt));
  const auto s = screen(records, parallel).summary();
  std::printf("AC9   INFO  snapshot counts are not gated: synthetic run screened %zu records, %zu included\n",
              s.total, s.included);
}

void ac10() {
  double worst_a = 0.0, worst_t = 0.0;
  const double omega = units::angular_from_ghz(4.5);
  DefectPopulation pop;
  pop.add({1.0, 1e24});
  for (const auto& r : read_records(kFixture)) {
    const auto d = derive_host(to_host_material(r));
    const auto r1 = evaluate(d, pop, omega);
    const auto r2 = evaluate(d, pop, 2.0 * omega);
    worst_a = std::max(worst_a, std::abs(r2.a / (4.0 * r1.a) - 1.0));
    worst_t = std::max(worst_t, std::abs(r2.tan_delta / (2.0 * r1.tan_delta) - 1.0));
  }
  report("AC10", worst_a <= 1e-12 && worst_t <= 1e-12,
         fmt("frequency scaling over the fixture: a(2w)/4a(w) max dev %.3e, tan(2w)/2tan(w) max dev %.3e "
             "(tol 1e-12)",
             worst_a, worst_t));
}

}  // namespace

int main() {
  try {
    ac1();
    ac2();
    ac3();
    ac4();
    ac5();
    ac6();
    ac7();
    ac8();
    ac10();
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 2;
  }
  std::printf("%s: %d failing criteria\n", g_failures ? "FAILED" : "OK", g_failures);
  return g_failures ? 1 : 0;
}
