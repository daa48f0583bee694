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
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "approx.hpp"

#include "defectloss/defectloss.h"

using defectloss::testing::Rel;

namespace {

const std::string kData = DEFECTLOSS_DATA_DIR;

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path temp_path(const char* name) {
  return std::filesystem::temp_directory_path() / (std::string("dl_capi_") + name);
}

}  // namespace

TEST_CASE("status names and version") {
  CHECK(std::strcmp(dl_version(), "1.0.0") == 0);
  CHECK(std::strcmp(dl_status_name(DL_OK), "ok") == 0);
  CHECK(std::strlen(dl_status_name(DL_ERR_NUMERICAL)) > 0);
  CHECK(std::strlen(dl_status_name(static_cast<dl_status>(99))) > 0);
}

TEST_CASE("scalar relations") {
  double m = 0.0;
  REQUIRE(dl_average_atomic_mass_amu("Al2O3", &m) == DL_OK);
  CHECK(m == Rel(20.39201536).epsilon(1e-12));
  CHECK(dl_average_atomic_mass_amu("Zz", &m) == DL_ERR_PARSE);
  CHECK(std::strstr(dl_last_error(), "Zz") != nullptr);
  CHECK(dl_average_atomic_mass_amu(nullptr, &m) == DL_ERR_NULL_POINTER);
  CHECK(dl_average_atomic_mass_amu("C", nullptr) == DL_ERR_NULL_POINTER);

  double vt = 0.0, vl = 0.0;
  REQUIRE(dl_sound_velocities(98e9, 66.5e9, 2329.0, &vt, &vl) == DL_OK);
  CHECK(vl == Rel(8948.0).epsilon(1e-3));
  CHECK(dl_sound_velocities(98e9, -1.0, 2329.0, &vt, &vl) == DL_ERR_INVALID_ARGUMENT);

  const double eps[9] = {9.73, 0, 0, 0, 9.73, 0, 0, 0, 9.73};
  double n = 0.0, f = 0.0;
  REQUIRE(dl_refractive_index(eps, &n) == DL_OK);
  REQUIRE(dl_local_field_factor(n * n, DL_LOCAL_FIELD_ONSAGER, &f) == DL_OK);
  CHECK(f * f == Rel(2.04).epsilon(5e-3));
  REQUIRE(dl_local_field_factor(n * n, DL_LOCAL_FIELD_LORENTZ_LORENZ, &f) == DL_OK);
  CHECK(f * f == Rel(15.3).epsilon(5e-3));
  CHECK(dl_local_field_factor(9.73, static_cast<dl_local_field>(17), &f) == DL_ERR_INVALID_ARGUMENT);

  double w = 0.0, t = 0.0, g = 0.0;
  REQUIRE(dl_angular_from_ghz(4.0, &w) == DL_OK);
  REQUIRE(dl_temperature_bound(w, &t) == DL_OK);
  CHECK(t == Rel(0.192).epsilon(0.005));
  REQUIRE(dl_corrected_gap(1.0, &g) == DL_OK);
  CHECK(g == Rel(2.271));
  CHECK(dl_corrected_gap(-1.0, &g) == DL_ERR_INVALID_ARGUMENT);
  double i1 = 0.0;
  REQUIRE(dl_attenuate(2.0, 0.5, 2.0, &i1) == DL_OK);
  CHECK(i1 == Rel(2.0 * std::exp(-1.0)));
}

TEST_CASE("defect spec parsing") {
  double z = 0.0, n = 0.0;
  REQUIRE(dl_parse_defect_spec("-3,0.333e18/cm3", &z, &n) == DL_OK);
  CHECK(z == -3.0);
  CHECK(n == Rel(0.333e24));
  REQUIRE(dl_parse_defect_spec("1, 1e24/m3", &z, &n) == DL_OK);
  CHECK(n == Rel(1e24));
  REQUIRE(dl_parse_defect_spec("2,5e17 cm-3", &z, &n) == DL_OK);
  CHECK(n == Rel(5e23));
  REQUIRE(dl_parse_defect_spec("0,1e18/cm^3", &z, &n) == DL_OK);
  CHECK(z == 0.0);
  CHECK(dl_parse_defect_spec("1,1e18", &z, &n) == DL_ERR_PARSE);
  CHECK(dl_parse_defect_spec("1,/cm3", &z, &n) == DL_ERR_PARSE);
  CHECK(dl_parse_defect_spec("1e18/cm3", &z, &n) == DL_ERR_PARSE);
  CHECK(dl_parse_defect_spec("x,1e18/cm3", &z, &n) == DL_ERR_PARSE);
  CHECK(dl_parse_defect_spec("1,-1e18/cm3", &z, &n) != DL_OK);
  CHECK(dl_parse_defect_spec("1,1e18/in3", &z, &n) == DL_ERR_PARSE);
}

TEST_CASE("host and loss evaluation") {
  dl_host* h = nullptr;
  REQUIRE(dl_host_load_record((kData + "/table1_fixture.jsonl").c_str(), "t1-Al2O3", &h) == DL_OK);
  dl_host_info info{};
  REQUIRE(dl_host_info_get(h, &info) == DL_OK);
  CHECK(std::strcmp(info.formula, "Al2O3") == 0);
  CHECK(std::strcmp(info.id, "t1-Al2O3") == 0);
  CHECK(info.mean_mass_amu == Rel(20.39201536));

  dl_host_derived d{};
  const dl_derive_options opts = dl_derive_options_default();
  CHECK(opts.local_field == DL_LOCAL_FIELD_ONSAGER);
  CHECK(opts.velocity == DL_VELOCITY_TRANSVERSE);
  REQUIRE(dl_host_derive(h, &opts, &d) == DL_OK);
  CHECK(d.v_t == Rel(5.77e3).epsilon(2e-3));

  dl_defects* pop = nullptr;
  REQUIRE(dl_defects_create(&pop) == DL_OK);
  REQUIRE(dl_defects_add(pop, 1.0, 1e24) == DL_OK);
  REQUIRE(dl_defects_add(pop, -3.0, 1e24 / 3.0) == DL_OK);
  CHECK(dl_defects_add(pop, 1.0, -1.0) == DL_ERR_INVALID_ARGUMENT);
  size_t count = 0;
  REQUIRE(dl_defects_count(pop, &count) == DL_OK);
  CHECK(count == 2);
  double zz = 0.0, nn = 0.0;
  REQUIRE(dl_defects_get(pop, 1, &zz, &nn) == DL_OK);
  CHECK(zz == -3.0);
  CHECK(dl_defects_get(pop, 2, &zz, &nn) == DL_ERR_NOT_FOUND);
  int neutral = 0;
  REQUIRE(dl_defects_is_neutral(pop, &neutral) == DL_OK);
  CHECK(neutral == 1);

  double w = 0.0;
  dl_angular_from_ghz(4.5, &w);
  dl_loss_result r{};
  REQUIRE(dl_evaluate(&d, pop, w, &r) == DL_OK);
  CHECK(r.tan_delta == Rel(7.2e-9).epsilon(0.03));
  double direct = 0.0;
  REQUIRE(dl_loss_tangent_direct(pop, d.field_factor, d.n_r, info.mass_density, d.v_s, w, &direct) == DL_OK);
  CHECK(direct == Rel(r.tan_delta).epsilon(1e-3));

  dl_defects_destroy(pop);
  dl_host_destroy(h);
  dl_host_destroy(nullptr);
  dl_defects_destroy(nullptr);
}

TEST_CASE("host construction errors") {
  dl_host* h = nullptr;
  dl_host_params p{};
  p.id = "bad";
  p.formula = "MgO";
  p.mass_density = 3580.0;
  p.site_density = 1.07e29;
  p.bulk_modulus = 160e9;
  p.shear_modulus = -1.0;
  const double eps[9] = {9.8, 0, 0, 0, 9.8, 0, 0, 0, 9.8};
  std::memcpy(p.dielectric, eps, sizeof eps);
  CHECK(dl_host_create(&p, &h) == DL_ERR_INVALID_ARGUMENT);
  CHECK(h == nullptr);
  CHECK(std::strstr(dl_last_error(), "shear_modulus") != nullptr);
  p.shear_modulus = 130e9;
  p.site_density = 8.0 / (74.7e-30);
  p.mass_density = 3580.0;
  REQUIRE(dl_host_create(&p, &h) == DL_OK);
  dl_host_destroy(h);

  CHECK(dl_host_from_record_json("{broken", &h) == DL_ERR_PARSE);
  CHECK(dl_host_load_record("/nonexistent.jsonl", nullptr, &h) == DL_ERR_IO);
  CHECK(dl_host_load_record((kData + "/table1_fixture.jsonl").c_str(), "no-such-id", &h) == DL_ERR_NOT_FOUND);
  CHECK(dl_host_create(nullptr, &h) == DL_ERR_NULL_POINTER);
}

TEST_CASE("spectral functions") {
  dl_spectrum* s = nullptr;
  const double wm = 1e14;
  REQUIRE(dl_spectrum_debye(wm, &s) == DL_OK);
  double mu_max = 0.0, pv = 0.0, chi = 0.0, lim = 0.0, err = 0.0;
  REQUIRE(dl_spectrum_mu_max(s, &mu_max) == DL_OK);
  REQUIRE(dl_pv_integral(s, 0.25 * mu_max, &pv) == DL_OK);
  CHECK(pv * mu_max == Rel(3.0 * (1.0 + 0.25 * std::log(1.0 / 3.0))).epsilon(1e-10));
  REQUIRE(dl_chi_squared(s, 0.0, 2.0, 0.3 * mu_max, &chi) == DL_OK);
  CHECK(chi == 0.5);
  CHECK(dl_chi_squared(s, 1.5, 1.0, 0.3 * mu_max, &chi) == DL_ERR_INVALID_ARGUMENT);
  REQUIRE(dl_acoustic_limit(s, 0.5, 1.0, &lim, &err) == DL_OK);
  CHECK(lim == Rel(1.0).epsilon(1e-4));

  const auto out = temp_path("sweep.csv");
  const double z[3] = {0.1 * mu_max, 0.2 * mu_max, 0.3 * mu_max};
  REQUIRE(dl_chi_sweep_write_csv(s, 0.5, z, 3, 2, out.c_str()) == DL_OK);
  const auto text = slurp(out);
  CHECK(text.rfind("z,chi2_times_Na,pv_value\n", 0) == 0);
  std::filesystem::remove(out);
  CHECK(dl_chi_sweep_write_csv(s, 0.5, z, 3, 2, "/nonexistent-dir/x.csv") == DL_ERR_IO);
  dl_spectrum_destroy(s);

  const double w[4] = {0.0, 1e13, 2e13, 3e13};
  const double rho[4] = {0.0, 1.0, 4.0, 9.0};
  REQUIRE(dl_spectrum_from_dos(w, rho, 4, DL_INTERP_LINEAR, &s) == DL_OK);
  double v = 0.0;
  REQUIRE(dl_spectrum_value(s, 4e26, &v) == DL_OK);
  CHECK(v > 0.0);
  dl_spectrum_destroy(s);
  CHECK(dl_spectrum_from_dos_file("/nonexistent.csv", DL_INTERP_LINEAR, &s) == DL_ERR_IO);
  CHECK(dl_spectrum_debye(-1.0, &s) == DL_ERR_INVALID_ARGUMENT);
}

TEST_CASE("screening through the C surface") {
  dl_screen_config* cfg = nullptr;
  REQUIRE(dl_screen_config_create(&cfg) == DL_OK);
  dl_screen_config_values vals{};
  REQUIRE(dl_screen_config_get(cfg, &vals) == DL_OK);
  CHECK(vals.frequency_ghz == 4.5);
  CHECK(vals.n_def_per_cm3 == 1e18);

  dl_screen_result* res = nullptr;
  REQUIRE(dl_screen_text(dl_bundled_fixture(), cfg, nullptr, &res) == DL_OK);
  dl_screen_counts counts{};
  REQUIRE(dl_screen_counts_get(res, &counts) == DL_OK);
  CHECK(counts.total == 18);
  CHECK(counts.included == 18);
  dl_screen_row row{};
  REQUIRE(dl_screen_row_get(res, 0, &row) == DL_OK);
  CHECK(std::strcmp(row.formula, "C") == 0);
  CHECK(row.tan_delta == Rel(3.4e-10).epsilon(0.05));
  CHECK(dl_screen_row_get(res, 18, &row) == DL_ERR_NOT_FOUND);

  const auto table = temp_path("table.csv");
  REQUIRE(dl_screen_write_table(res, table.c_str(), DL_FORMAT_CSV) == DL_OK);
  CHECK(slurp(table) == slurp(kData + "/table1_golden.csv"));
  std::filesystem::remove(table);
  dl_screen_result_destroy(res);

  vals.local_field = DL_LOCAL_FIELD_LORENTZ_LORENZ;
  REQUIRE(dl_screen_config_set(cfg, &vals) == DL_OK);
  REQUIRE(dl_screen_file((kData + "/table1_fixture.jsonl").c_str(), cfg, nullptr, &res) == DL_OK);
  REQUIRE(dl_screen_row_get(res, 0, &row) == DL_OK);
  CHECK(row.tan_delta > 3.4e-10 * 3.0);
  dl_screen_result_destroy(res);

  vals.frequency_ghz = -1.0;
  CHECK(dl_screen_config_set(cfg, &vals) == DL_ERR_INVALID_ARGUMENT);

  dl_overrides* o = nullptr;
  REQUIRE(dl_overrides_load((kData + "/al2o3_overrides.csv").c_str(), &o) == DL_OK);
  dl_screen_config_destroy(cfg);
  REQUIRE(dl_screen_config_load((kData + "/default.toml").c_str(), &cfg) == DL_OK);
  REQUIRE(dl_screen_text(dl_bundled_fixture(), cfg, o, &res) == DL_OK);
  bool found = false;
  for (size_t i = 0; dl_screen_row_get(res, i, &row) == DL_OK; ++i)
    if (std::strcmp(row.id, "t1-Al2O3") == 0) {
      found = true;
      CHECK(row.tan_delta == Rel(7.2e-9).epsilon(0.03));
    }
  CHECK(found);
  dl_screen_result_destroy(res);
  dl_overrides_destroy(o);

  REQUIRE(dl_screen_text("", cfg, nullptr, &res) == DL_OK);
  REQUIRE(dl_screen_counts_get(res, &counts) == DL_OK);
  CHECK(counts.total == 0);
  dl_screen_result_destroy(res);

  REQUIRE(dl_screen_text("{bad json\n", cfg, nullptr, &res) == DL_OK);
  REQUIRE(dl_screen_counts_get(res, &counts) == DL_OK);
  CHECK(counts.invalid_data == 1);
  dl_screen_result_destroy(res);

  CHECK(dl_screen_file("/nonexistent.jsonl", cfg, nullptr, &res) == DL_ERR_IO);
  CHECK(dl_screen_config_load("/nonexistent.toml", &cfg) == DL_ERR_IO);
  dl_screen_config_destroy(cfg);
}
