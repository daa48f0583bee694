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
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "defectloss/defectloss.h"

namespace {

using nlohmann::json;

constexpr int kExitInput = 1;
constexpr int kExitInternal = 2;

// Carries a dl_status out of the subcommand bodies.
struct Failure {
  dl_status status;
  std::string message;
};

void check(dl_status s, const std::string& context = {}) {
  if (s == DL_OK) return;
  std::string msg = dl_last_error();
  if (!context.empty()) msg = context + ": " + msg;
  throw Failure{s, msg};
}

[[noreturn]] void input_error(const std::string& msg) { throw Failure{DL_ERR_INVALID_ARGUMENT, msg}; }

template <class T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using HostPtr = std::unique_ptr<dl_host, Deleter<dl_host, dl_host_destroy>>;
using DefectsPtr = std::unique_ptr<dl_defects, Deleter<dl_defects, dl_defects_destroy>>;
using SpectrumPtr = std::unique_ptr<dl_spectrum, Deleter<dl_spectrum, dl_spectrum_destroy>>;
using ConfigPtr = std::unique_ptr<dl_screen_config, Deleter<dl_screen_config, dl_screen_config_destroy>>;
using OverridesPtr = std::unique_ptr<dl_overrides, Deleter<dl_overrides, dl_overrides_destroy>>;
using ResultPtr = std::unique_ptr<dl_screen_result, Deleter<dl_screen_result, dl_screen_result_destroy>>;

bool g_verbose = false;

void note(const std::string& msg) {
  if (g_verbose) std::cerr << "defectloss: " << msg << '\n';
}

std::string sci6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5e", v);
  return buf;
}

const std::map<std::string, dl_local_field> kLocalFields{
    {"onsager", DL_LOCAL_FIELD_ONSAGER}, {"lorentz", DL_LOCAL_FIELD_LORENTZ_LORENZ}, {"unity", DL_LOCAL_FIELD_UNITY}};
const std::map<std::string, dl_velocity> kVelocities{
    {"transverse", DL_VELOCITY_TRANSVERSE}, {"longitudinal", DL_VELOCITY_LONGITUDINAL}, {"fitted", DL_VELOCITY_FITTED}};
const std::map<std::string, dl_table_format> kFormats{
    {"csv", DL_FORMAT_CSV}, {"text", DL_FORMAT_TEXT}, {"json", DL_FORMAT_JSON}};
const std::map<std::string, dl_interpolation> kInterps{
    {"cubic", DL_INTERP_MONOTONE_CUBIC}, {"linear", DL_INTERP_LINEAR}};

template <class M>
std::string key_of(const M& m, typename M::mapped_type v) {
  for (const auto& [k, x] : m)
    if (x == v) return k;
  return "?";
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{DL_ERR_IO, "cannot open for writing: " + path};
  out << text;
  if (!out.flush()) throw Failure{DL_ERR_IO, "write failed: " + path};
}

// ---- compute ---------------------------------------------------------------

struct ComputeArgs {
  std::string record;
  std::string id;
  std::string formula;
  std::optional<double> density_g_cm3;
  std::optional<int> natoms;
  std::optional<double> volume_a3;
  std::optional<double> site_density_m3;
  std::optional<double> bulk_gpa;
  std::optional<double> shear_gpa;
  std::vector<double> eps;
  double gap_ev = 1.0;
  std::vector<std::string> defects;
  double freq_ghz = 4.5;
  std::string local_field = "onsager";
  std::string velocity = "transverse";
  std::optional<double> fitted_velocity;
  bool temp_check = false;
  std::string format = "text";
  std::string output = "-";
  std::string verify;
};

HostPtr host_from_bundled(const std::string& id) {
  std::istringstream lines(dl_bundled_fixture());
  for (std::string line; std::getline(lines, line);) {
    dl_host* h = nullptr;
    if (line.empty() || dl_host_from_record_json(line.c_str(), &h) != DL_OK) continue;
    HostPtr host(h);
    dl_host_info info{};
    check(dl_host_info_get(h, &info));
    if (id == info.id) return host;
  }
  throw Failure{DL_ERR_NOT_FOUND, "no bundled record with material_id '" + id + "'"};
}

void fill_dielectric(const std::vector<double>& eps, double out[9]) {
  for (int i = 0; i < 9; ++i) out[i] = 0.0;
  if (eps.size() == 1) {
    out[0] = out[4] = out[8] = eps[0];
  } else if (eps.size() == 3) {
    out[0] = eps[0];
    out[4] = eps[1];
    out[8] = eps[2];
  } else if (eps.size() == 9) {
    for (int i = 0; i < 9; ++i) out[i] = eps[i];
  } else {
    input_error("--eps takes 1 (isotropic), 3 (diagonal) or 9 (full tensor) values");
  }
}

HostPtr host_from_inline(const ComputeArgs& a) {
  if (a.formula.empty()) input_error("missing host: give --record, --id or --formula with inline properties");
  auto need = [](bool ok, const char* flag) {
    if (!ok) input_error(std::string("missing parameter ") + flag);
  };
  need(a.density_g_cm3.has_value(), "--density-g-cm3");
  need(a.bulk_gpa.has_value(), "--bulk-gpa");
  need(a.shear_gpa.has_value(), "--shear-gpa");
  need(!a.eps.empty(), "--eps");
  dl_host_params p{};
  p.id = "inline";
  p.formula = a.formula.c_str();
  p.mass_density = *a.density_g_cm3 * 1e3;
  if (a.site_density_m3) {
    p.site_density = *a.site_density_m3;
  } else {
    need(a.natoms && a.volume_a3, "--natoms and --volume-a3 (or --site-density-m3)");
    p.site_density = *a.natoms / (*a.volume_a3 * 1e-30);
  }
  p.bulk_modulus = *a.bulk_gpa * 1e9;
  p.shear_modulus = *a.shear_gpa * 1e9;
  fill_dielectric(a.eps, p.dielectric);
  p.band_gap_pbe_ev = a.gap_ev;
  dl_host* h = nullptr;
  check(dl_host_create(&p, &h), "host");
  return HostPtr(h);
}

struct ComputeOutcome {
  dl_host_info info;
  dl_host_derived derived;
  dl_loss_result loss;
  std::vector<std::pair<double, double>> defects;  // (Z, N per m^3)
  bool neutral;
};

ComputeOutcome run_compute(const dl_host* host, const std::vector<std::pair<double, double>>& species,
                           double omega, const dl_derive_options& opts) {
  ComputeOutcome out{};
  check(dl_host_info_get(host, &out.info));
  check(dl_host_derive(host, &opts, &out.derived), "derive");
  dl_defects* d = nullptr;
  check(dl_defects_create(&d));
  DefectsPtr pop(d);
  for (auto [z, n] : species) check(dl_defects_add(d, z, n), "defect");
  int neutral = 0;
  check(dl_defects_is_neutral(d, &neutral));
  out.neutral = neutral != 0;
  check(dl_evaluate(&out.derived, d, omega, &out.loss), "evaluate");
  out.defects = species;
  return out;
}

const std::vector<std::pair<const char*, double dl_host_derived::*>> kDerivedFields{
    {"v_t_m_s", &dl_host_derived::v_t},         {"v_l_m_s", &dl_host_derived::v_l},
    {"v_s_m_s", &dl_host_derived::v_s},         {"omega_m_rad_s", &dl_host_derived::omega_m},
    {"n_r", &dl_host_derived::n_r},             {"eps", &dl_host_derived::eps},
    {"field_factor", &dl_host_derived::field_factor}, {"mean_mass_kg", &dl_host_derived::mean_mass_kg},
    {"a_c_m_s", &dl_host_derived::a_c}};
const std::vector<std::pair<const char*, double dl_loss_result::*>> kLossFields{
    {"omega_rad_s", &dl_loss_result::omega},    {"sigma_m2", &dl_loss_result::sigma},
    {"absorption_per_m", &dl_loss_result::absorption}, {"tan_delta", &dl_loss_result::tan_delta},
    {"t_star_k", &dl_loss_result::t_star}};

json outcome_json(const ComputeOutcome& o, double freq_ghz, const dl_derive_options& opts) {
  json host{{"id", o.info.id},
            {"formula", o.info.formula},
            {"space_group", o.info.space_group},
            {"mass_density_kg_m3", o.info.mass_density},
            {"site_density_m3", o.info.site_density},
            {"bulk_modulus_pa", o.info.bulk_modulus},
            {"shear_modulus_pa", o.info.shear_modulus},
            {"dielectric", std::vector<double>(o.info.dielectric, o.info.dielectric + 9)},
            {"band_gap_pbe_ev", o.info.band_gap_pbe_ev}};
  json defects = json::array();
  for (auto [z, n] : o.defects) defects.push_back({{"z_eff", z}, {"n_def_m3", n}});
  json results;
  for (const auto& [k, m] : kDerivedFields) results[k] = o.derived.*m;
  for (const auto& [k, m] : kLossFields) results[k] = o.loss.*m;
  results["omega_m_thz"] = o.derived.omega_m / (2.0 * M_PI * 1e12);
  json options{{"local_field", key_of(kLocalFields, opts.local_field)},
               {"velocity", key_of(kVelocities, opts.velocity)},
               {"fitted_velocity_m_s", opts.fitted_velocity}};
  return json{{"host", host}, {"defects", defects}, {"frequency_ghz", freq_ghz},
              {"options", options}, {"results", results}};
}

std::string render_text(const ComputeOutcome& o, double freq_ghz) {
  std::ostringstream out;
  auto row = [&](const char* k, const std::string& v) {
    out << k << std::string(std::max<int>(1, 20 - static_cast<int>(std::strlen(k))), ' ') << v << '\n';
  };
  row("material", std::string(o.info.id) + " (" + o.info.formula + ")");
  row("frequency_ghz", sci6(freq_ghz));
  row("v_t_m_s", sci6(o.derived.v_t));
  row("v_l_m_s", sci6(o.derived.v_l));
  row("omega_m_thz", sci6(o.derived.omega_m / (2.0 * M_PI * 1e12)));
  row("n_r", sci6(o.derived.n_r));
  row("field_factor", sci6(o.derived.field_factor));
  row("a_c_m_s", sci6(o.derived.a_c));
  row("sigma_m2", sci6(o.loss.sigma));
  row("absorption_per_m", sci6(o.loss.absorption));
  row("tan_delta", sci6(o.loss.tan_delta));
  row("t_star_k", sci6(o.loss.t_star));
  return out.str();
}

std::string render_csv(const ComputeOutcome& o) {
  std::ostringstream head, vals;
  head << "material_id,formula";
  vals << o.info.id << ',' << o.info.formula;
  for (const auto& [k, m] : kDerivedFields) {
    head << ',' << k;
    vals << ',' << sci6(o.derived.*m);
  }
  for (const auto& [k, m] : kLossFields) {
    head << ',' << k;
    vals << ',' << sci6(o.loss.*m);
  }
  return head.str() + '\n' + vals.str() + '\n';
}

dl_derive_options options_from(const std::string& lf, const std::string& vel, std::optional<double> fitted) {
  dl_derive_options opts = dl_derive_options_default();
  opts.local_field = kLocalFields.at(lf);
  opts.velocity = kVelocities.at(vel);
  if (fitted) {
    opts.velocity = DL_VELOCITY_FITTED;
    opts.fitted_velocity = *fitted;
  } else if (opts.velocity == DL_VELOCITY_FITTED) {
    input_error("--velocity fitted requires --fitted-velocity");
  }
  return opts;
}

int verify_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure{DL_ERR_IO, "cannot open " + path};
  json doc;
  try {
    doc = json::parse(in);
    const auto& h = doc.at("host");
    const std::string id = h.at("id").get<std::string>();
    const std::string formula = h.at("formula").get<std::string>();
    const std::string sg = h.at("space_group").get<std::string>();
    dl_host_params p{};
    p.id = id.c_str();
    p.formula = formula.c_str();
    p.space_group = sg.c_str();
    p.mass_density = h.at("mass_density_kg_m3").get<double>();
    p.site_density = h.at("site_density_m3").get<double>();
    p.bulk_modulus = h.at("bulk_modulus_pa").get<double>();
    p.shear_modulus = h.at("shear_modulus_pa").get<double>();
    const auto eps = h.at("dielectric").get<std::vector<double>>();
    if (eps.size() != 9) input_error("verify: dielectric must have 9 entries");
    fill_dielectric(eps, p.dielectric);
    p.band_gap_pbe_ev = h.at("band_gap_pbe_ev").get<double>();
    dl_host* raw = nullptr;
    check(dl_host_create(&p, &raw), "verify host");
    HostPtr host(raw);

    std::vector<std::pair<double, double>> species;
    for (const auto& d : doc.at("defects")) species.emplace_back(d.at("z_eff").get<double>(), d.at("n_def_m3").get<double>());
    const double freq = doc.at("frequency_ghz").get<double>();
    const auto& o = doc.at("options");
    const std::string lf = o.at("local_field").get<std::string>();
    const std::string vel = o.at("velocity").get<std::string>();
    if (!kLocalFields.count(lf) || !kVelocities.count(vel)) input_error("verify: unknown option value");
    std::optional<double> fitted;
    if (vel == "fitted") fitted = o.at("fitted_velocity_m_s").get<double>();
    const auto opts = options_from(lf, vel, fitted);
    double omega = 0.0;
    check(dl_angular_from_ghz(freq, &omega));
    const auto fresh = outcome_json(run_compute(host.get(), species, omega, opts), freq, opts);

    int mismatches = 0;
    int compared = 0;
    for (const auto& [k, stored] : doc.at("results").items()) {
      if (!fresh.at("results").contains(k)) input_error("verify: unknown result field " + k);
      const double a = stored.get<double>();
      const double b = fresh.at("results").at(k).get<double>();
      const double scale = std::max(std::abs(a), std::abs(b));
      ++compared;
      if (scale == 0.0 || std::abs(a - b) <= 1e-10 * scale) continue;
      ++mismatches;
      std::cerr << "verify: " << k << " stored " << a << " recomputed " << b << '\n';
    }
    if (compared != static_cast<int>(fresh.at("results").size()))
      input_error("verify: result fields missing from " + path);
    if (mismatches) {
      std::cout << "verify: FAILED (" << mismatches << " of " << compared << " fields differ)\n";
      return kExitInput;
    }
    std::cout << "verify: OK (" << compared << " fields within 1e-10)\n";
    return 0;
  } catch (const json::exception& e) {
    throw Failure{DL_ERR_PARSE, std::string("verify: malformed JSON: ") + e.what()};
  }
}

int cmd_compute(const ComputeArgs& a) {
  if (!a.verify.empty()) return verify_json(a.verify);

  HostPtr host;
  if (!a.record.empty()) {
    dl_host* h = nullptr;
    check(dl_host_load_record(a.record.c_str(), a.id.empty() ? nullptr : a.id.c_str(), &h), "record");
    host.reset(h);
  } else if (!a.id.empty()) {
    host = host_from_bundled(a.id);
  } else {
    host = host_from_inline(a);
  }

  std::vector<std::pair<double, double>> species;
  for (const auto& spec : a.defects) {
    double z = 0.0, n = 0.0;
    check(dl_parse_defect_spec(spec.c_str(), &z, &n), "--defect");
    species.emplace_back(z, n);
  }
  if (species.empty()) input_error("at least one --defect Z,N/cm3 is required");

  const auto opts = options_from(a.local_field, a.velocity, a.fitted_velocity);
  double omega = 0.0;
  check(dl_angular_from_ghz(a.freq_ghz, &omega));
  const auto outcome = run_compute(host.get(), species, omega, opts);
  if (!outcome.neutral) std::cerr << "warning: defect population is not charge neutral\n";

  std::string text;
  if (a.format == "json") text = outcome_json(outcome, a.freq_ghz, opts).dump(2) + "\n";
  else if (a.format == "csv") text = render_csv(outcome);
  else text = render_text(outcome, a.freq_ghz);
  if (a.temp_check) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "T* = %.1f mK (keep k_B T well below hbar*omega, i.e. T << %.1f mK)\n",
                  outcome.loss.t_star * 1e3, outcome.loss.t_star * 1e3);
    if (a.format == "text") text += buf;
    else std::cerr << buf;
  }
  write_output(a.output, text);
  return 0;
}

// ---- screen ----------------------------------------------------------------

struct ScreenArgs {
  std::string db;
  std::string config;
  std::string overrides;
  std::string out_dir = ".";
  std::string format = "csv";
  std::optional<unsigned> threads;
};

int cmd_screen(const ScreenArgs& a) {
  dl_screen_config* c = nullptr;
  if (a.config.empty()) check(dl_screen_config_create(&c));
  else check(dl_screen_config_load(a.config.c_str(), &c), "config");
  ConfigPtr cfg(c);
  if (a.threads) {
    dl_screen_config_values v{};
    check(dl_screen_config_get(c, &v));
    v.threads = *a.threads;
    check(dl_screen_config_set(c, &v));
  }
  OverridesPtr ov;
  if (!a.overrides.empty()) {
    dl_overrides* o = nullptr;
    check(dl_overrides_load(a.overrides.c_str(), &o), "overrides");
    ov.reset(o);
  }
  dl_screen_result* r = nullptr;
  check(dl_screen_file(a.db.c_str(), c, ov.get(), &r), "database");
  ResultPtr res(r);

  std::error_code ec;
  std::filesystem::create_directories(a.out_dir, ec);
  if (ec) throw Failure{DL_ERR_IO, "cannot create output directory " + a.out_dir + ": " + ec.message()};
  const std::filesystem::path dir(a.out_dir);
  const std::string ext = a.format == "text" ? "txt" : a.format;
  const auto table = (dir / ("table." + ext)).string();
  const auto debye = (dir / "debye_scatter.csv").string();
  const auto gap = (dir / "gap_scatter.csv").string();
  const auto excl = (dir / "exclusions.csv").string();
  check(dl_screen_write_table(r, table.c_str(), kFormats.at(a.format)), "table");
  check(dl_screen_write_figures(r, debye.c_str(), gap.c_str()), "figures");
  check(dl_screen_write_exclusions(r, excl.c_str()), "exclusions");
  note("wrote " + table + ", " + debye + ", " + gap + ", " + excl);

  dl_screen_counts n{};
  check(dl_screen_counts_get(r, &n));
  std::cout << "records            " << n.total << '\n'
            << "included           " << n.included << '\n'
            << "excluded NoGap     " << n.no_gap << '\n'
            << "excluded Magnetic  " << n.magnetic << '\n'
            << "excluded MissingElastic    " << n.missing_elastic << '\n'
            << "excluded MissingDielectric " << n.missing_dielectric << '\n'
            << "excluded InvalidData       " << n.invalid_data << '\n';
  return 0;
}

// ---- chi -------------------------------------------------------------------

struct ChiArgs {
  bool debye = false;
  std::string dos;
  double omega_m = 1e14;
  double eps_mass = 0.0;
  double n_atoms = 1.0;
  int points = 100;
  std::vector<double> z;
  double z_min = 1e-3;
  double z_max = 0.99;
  std::string interp = "cubic";
  unsigned threads = 1;
  std::string output = "-";
};

int cmd_chi(const ChiArgs& a) {
  if (a.debye == !a.dos.empty()) input_error("give exactly one of --debye or --dos");
  dl_spectrum* s = nullptr;
  if (a.debye) check(dl_spectrum_debye(a.omega_m, &s), "spectrum");
  else check(dl_spectrum_from_dos_file(a.dos.c_str(), kInterps.at(a.interp), &s), "dos");
  SpectrumPtr spec(s);
  double mu_max = 0.0;
  check(dl_spectrum_mu_max(s, &mu_max));

  std::vector<double> z;
  if (!a.z.empty()) {
    for (double f : a.z) z.push_back(f * mu_max);
  } else {
    if (a.points < 1) input_error("--points must be >= 1");
    if (!(a.z_min > 0.0 && a.z_max > a.z_min && a.z_max < 1.0))
      input_error("need 0 < --z-min < --z-max < 1");
    for (int i = 0; i < a.points; ++i) {
      const double f = a.points == 1 ? a.z_min : a.z_min + (a.z_max - a.z_min) * i / (a.points - 1);
      z.push_back(f * mu_max);
    }
  }
  // Probe every point first so a bad z fails before any output is written.
  for (double zi : z) {
    double chi = 0.0;
    check(dl_chi_squared(s, a.eps_mass, a.n_atoms, zi, &chi), "chi");
  }
  double limit = 0.0, error = 0.0;
  check(dl_acoustic_limit(s, a.eps_mass, 1.0, &limit, &error), "acoustic limit");

  char trailer[96];
  std::snprintf(trailer, sizeof trailer, "# acoustic_limit=%.10f error=%.3e\n", limit, error);
  check(dl_chi_sweep_write_csv(s, a.eps_mass, z.data(), z.size(), a.threads, a.output.c_str()), "sweep");
  if (a.output == "-") {
    std::cout << trailer;
  } else {
    std::ofstream out(a.output, std::ios::app);
    out << trailer;
    if (!out.flush()) throw Failure{DL_ERR_IO, "write failed: " + a.output};
  }
  return 0;
}

// ---- table -----------------------------------------------------------------

int cmd_table(const std::string& fixture, const std::string& output) {
  dl_screen_config* c = nullptr;
  check(dl_screen_config_create(&c));
  ConfigPtr cfg(c);
  dl_screen_result* r = nullptr;
  if (fixture.empty()) check(dl_screen_text(dl_bundled_fixture(), c, nullptr, &r), "fixture");
  else check(dl_screen_file(fixture.c_str(), c, nullptr, &r), "fixture");
  ResultPtr res(r);
  check(dl_screen_write_table(r, output.empty() ? "-" : output.c_str(), DL_FORMAT_CSV), "table");
  return 0;
}

int exit_code_for(dl_status s) { return s == DL_ERR_INTERNAL ? kExitInternal : kExitInput; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Defect-induced microwave loss in crystalline substrates"};
  app.set_version_flag("--version", std::string(dl_version()));
  app.add_flag("-v,--verbose", g_verbose, "Diagnostics on stderr");
  app.require_subcommand(1);

  ComputeArgs ca;
  auto* compute = app.add_subcommand("compute", "Loss tangent of one host with given defects");
  compute->add_option("--record", ca.record, "Line-delimited JSON database export")->check(CLI::ExistingFile);
  compute->add_option("--id", ca.id, "material_id in --record, or in the bundled fixture");
  compute->add_option("--formula", ca.formula, "Chemical formula, e.g. Al2O3");
  compute->add_option("--density-g-cm3", ca.density_g_cm3, "Mass density");
  compute->add_option("--natoms", ca.natoms, "Atoms per cell");
  compute->add_option("--volume-a3", ca.volume_a3, "Cell volume in cubic angstrom");
  compute->add_option("--site-density-m3", ca.site_density_m3, "Atoms per cubic metre");
  compute->add_option("--bulk-gpa", ca.bulk_gpa, "Bulk modulus");
  compute->add_option("--shear-gpa", ca.shear_gpa, "Shear modulus");
  compute->add_option("--eps", ca.eps, "Static dielectric tensor: 1, 3 or 9 values")->delimiter(',');
  compute->add_option("--gap-ev", ca.gap_ev, "PBE band gap")->capture_default_str();
  compute->add_option("--defect", ca.defects, "Z,N/cm3 or Z,N/m3 (repeatable)")->allow_extra_args(false);
  compute->add_option("--freq-ghz", ca.freq_ghz, "Operating frequency")->capture_default_str()->check(CLI::PositiveNumber);
  compute->add_option("--local-field", ca.local_field, "onsager | lorentz | unity")
      ->capture_default_str()->check(CLI::IsMember({"onsager", "lorentz", "unity"}));
  compute->add_option("--velocity", ca.velocity, "transverse | longitudinal | fitted")
      ->capture_default_str()->check(CLI::IsMember({"transverse", "longitudinal", "fitted"}));
  compute->add_option("--fitted-velocity", ca.fitted_velocity, "Sound velocity for the Debye cutoff, m/s");
  compute->add_flag("--temp-check", ca.temp_check, "Print the temperature bound hbar*omega/k_B");
  compute->add_option("--format", ca.format, "text | json | csv")
      ->capture_default_str()->check(CLI::IsMember({"text", "json", "csv"}));
  compute->add_option("-o,--output", ca.output, "Output file, - for stdout")->capture_default_str();
  compute->add_option("--verify", ca.verify, "Recompute a --format json output and compare")->check(CLI::ExistingFile);

  ScreenArgs sa;
  auto* screen = app.add_subcommand("screen", "Screen a database export and write ranked tables");
  screen->add_option("--db", sa.db, "Line-delimited JSON database export")->required();
  screen->add_option("--config", sa.config, "key = value configuration file");
  screen->add_option("--overrides", sa.overrides, "CSV material_id,z_eff,n_def_per_cm3");
  screen->add_option("--out-dir", sa.out_dir, "Output directory")->capture_default_str();
  screen->add_option("--format", sa.format, "Table format: csv | text | json")
      ->capture_default_str()->check(CLI::IsMember({"csv", "text", "json"}));
  screen->add_option("--threads", sa.threads, "Worker threads, 0 = all cores");

  ChiArgs xa;
  auto* chi = app.add_subcommand("chi", "Mass-defect coefficient sweep");
  chi->add_flag("--debye", xa.debye, "Analytic Debye spectrum");
  chi->add_option("--dos", xa.dos, "CSV omega_rad_per_s,rho_per_rad_per_s");
  chi->add_option("--omega-m", xa.omega_m, "Debye frequency, rad/s")->capture_default_str()->check(CLI::PositiveNumber);
  chi->add_option("--eps-mass", xa.eps_mass, "(M - M') / M")->required();
  chi->add_option("--n-atoms", xa.n_atoms, "N_a")->capture_default_str();
  chi->add_option("--points", xa.points, "Sweep points")->capture_default_str();
  chi->add_option("--z", xa.z, "Explicit z values in units of mu_max (repeatable)");
  chi->add_option("--z-min", xa.z_min, "Sweep start, units of mu_max")->capture_default_str();
  chi->add_option("--z-max", xa.z_max, "Sweep end, units of mu_max")->capture_default_str();
  chi->add_option("--interp", xa.interp, "cubic | linear")->capture_default_str()->check(CLI::IsMember({"cubic", "linear"}));
  chi->add_option("--threads", xa.threads, "Worker threads")->capture_default_str();
  chi->add_option("-o,--output", xa.output, "Output file, - for stdout")->capture_default_str();

  std::string tfix, tout = "-";
  auto* table = app.add_subcommand("table", "Regenerate the reference table CSV from the fixture");
  table->add_option("--fixture", tfix, "Fixture file (default: bundled)");
  table->add_option("-o,--output", tout, "Output file, - for stdout")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (compute->parsed()) return cmd_compute(ca);
    if (screen->parsed()) return cmd_screen(sa);
    if (chi->parsed()) return cmd_chi(xa);
    if (table->parsed()) return cmd_table(tfix, tout);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return exit_code_for(f.status);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}
