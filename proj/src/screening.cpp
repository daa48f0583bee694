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

#include "defectloss/screening.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "defectloss/constants.hpp"
#include "defectloss/error.hpp"
#include "parallel.hpp"

namespace defectloss {

using nlohmann::json;

namespace {

// Reads an optional field; null counts as absent. Wrong types throw.
template <class T>
std::optional<T> read_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if constexpr (std::is_same_v<T, double>) {
    if (!it->is_number()) throw std::runtime_error(std::string("field ") + key + " is not a number");
    return it->template get<double>();
  } else if constexpr (std::is_same_v<T, int>) {
    if (!it->is_number_integer())
      throw std::runtime_error(std::string("field ") + key + " is not an integer");
    return it->template get<int>();
  } else if constexpr (std::is_same_v<T, bool>) {
    if (!it->is_boolean()) throw std::runtime_error(std::string("field ") + key + " is not a boolean");
    return it->template get<bool>();
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!it->is_string()) throw std::runtime_error(std::string("field ") + key + " is not a string");
    return it->template get<std::string>();
  } else {
    static_assert(std::is_same_v<T, Tensor3>);
    const auto bad = std::runtime_error(std::string("field ") + key + " is not a 3x3 array");
    if (!it->is_array() || it->size() != 3) throw bad;
    Tensor3 t{};
    for (std::size_t i = 0; i < 3; ++i) {
      const auto& row = (*it)[i];
      if (!row.is_array() || row.size() != 3) throw bad;
      for (std::size_t j = 0; j < 3; ++j) {
        if (!row[j].is_number()) throw bad;
        t[i][j] = row[j].get<double>();
      }
    }
    return t;
  }
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

double parse_number(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || !std::isfinite(v))
    fail(ErrorKind::Parse, "config: " + key + " expects a number, got '" + value + "'");
  return v;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string RawRecord::key() const {
  return material_id ? *material_id : "line:" + std::to_string(line);
}

RawRecord parse_record(std::string_view json_line, std::size_t line_no) {
  RawRecord r;
  r.line = line_no;
  const json obj = json::parse(json_line, nullptr, /*allow_exceptions=*/false);
  if (obj.is_discarded() || !obj.is_object()) {
    r.parse_error = "not a JSON object";
    return r;
  }
  try {
    r.material_id = read_field<std::string>(obj, "material_id");
  } catch (const std::exception& e) {
    r.parse_error = e.what();
    return r;
  }
  try {
    r.formula = read_field<std::string>(obj, "formula");
    r.spacegroup_symbol = read_field<std::string>(obj, "spacegroup_symbol");
    r.is_centrosymmetric = read_field<bool>(obj, "is_centrosymmetric");
    r.band_gap_pbe_ev = read_field<double>(obj, "band_gap_pbe_ev");
    r.is_magnetic = read_field<bool>(obj, "is_magnetic");
    r.total_magnetization_mu_b = read_field<double>(obj, "total_magnetization_mu_b");
    r.density_g_per_cm3 = read_field<double>(obj, "density_g_per_cm3");
    r.natoms = read_field<int>(obj, "natoms");
    r.volume_angstrom3 = read_field<double>(obj, "volume_angstrom3");
    r.site_density_per_m3 = read_field<double>(obj, "site_density_per_m3");
    r.bulk_modulus_vrh_gpa = read_field<double>(obj, "bulk_modulus_vrh_gpa");
    r.shear_modulus_vrh_gpa = read_field<double>(obj, "shear_modulus_vrh_gpa");
    r.dielectric_total = read_field<Tensor3>(obj, "dielectric_total");
    r.dielectric_electronic = read_field<Tensor3>(obj, "dielectric_electronic");
  } catch (const std::exception& e) {
    r.parse_error = e.what();
  }
  return r;
}

std::vector<RawRecord> read_records(std::istream& in) {
  std::vector<RawRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    out.push_back(parse_record(line, line_no));
  }
  if (in.bad()) fail(ErrorKind::Io, "error reading record stream");
  return out;
}

std::vector<RawRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open database file " + path.string());
  return read_records(in);
}

std::string_view to_string(ExclusionReason r) {
  switch (r) {
    case ExclusionReason::NoGap: return "NoGap";
    case ExclusionReason::Magnetic: return "Magnetic";
    case ExclusionReason::MissingElastic: return "MissingElastic";
    case ExclusionReason::MissingDielectric: return "MissingDielectric";
    case ExclusionReason::InvalidData: return "InvalidData";
  }
  return "?";
}

double ScreenConfig::omega() const { return units::angular_from_ghz(frequency_ghz); }

DefectPopulation ScreenConfig::default_defects() const {
  return DefectPopulation({{z_eff, n_def_per_cm3 * units::kPerCm3}});
}

DeriveOptions ScreenConfig::derive_options() const {
  return {.local_field = local_field, .velocity = velocity};
}

ScreenConfig parse_screen_config(std::istream& in) {
  ScreenConfig cfg;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw.substr(0, raw.find('#'));
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorKind::Parse, "config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') &&
        value.back() == value.front())
      value = value.substr(1, value.size() - 2);

    if (key == "frequency_ghz") {
      cfg.frequency_ghz = parse_number(key, value);
      if (cfg.frequency_ghz <= 0.0) fail(ErrorKind::Parse, "config: frequency_ghz must be > 0");
    } else if (key == "n_def_per_cm3") {
      cfg.n_def_per_cm3 = parse_number(key, value);
      if (cfg.n_def_per_cm3 < 0.0) fail(ErrorKind::Parse, "config: n_def_per_cm3 must be >= 0");
    } else if (key == "z_eff") {
      cfg.z_eff = parse_number(key, value);
    } else if (key == "gap_threshold_ev") {
      cfg.gap_threshold_ev = parse_number(key, value);
    } else if (key == "magnetization_threshold_mu_b") {
      cfg.magnetization_threshold_mu_b = parse_number(key, value);
    } else if (key == "threads") {
      const double t = parse_number(key, value);
      if (t < 0.0 || t != std::floor(t)) fail(ErrorKind::Parse, "config: threads must be a whole number");
      cfg.threads = static_cast<unsigned>(t);
    } else if (key == "local_field_model") {
      auto m = parse_local_field_model(value);
      if (!m) fail(ErrorKind::Parse, "config: unknown local_field_model '" + value + "'");
      cfg.local_field = *m;
    } else if (key == "velocity") {
      auto v = parse_velocity_choice(value);
      if (!v || *v == VelocityChoice::Fitted)
        fail(ErrorKind::Parse, "config: velocity must be transverse or longitudinal");
      cfg.velocity = *v;
    } else if (key == "dielectric") {
      if (value == "total") cfg.dielectric = DielectricSource::Total;
      else if (value == "electronic") cfg.dielectric = DielectricSource::Electronic;
      else fail(ErrorKind::Parse, "config: dielectric must be total or electronic");
    } else {
      fail(ErrorKind::Parse, "config: unknown key '" + key + "'");
    }
  }
  return cfg;
}

ScreenConfig load_screen_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open config file " + path.string());
  return parse_screen_config(in);
}

DefectOverrides parse_overrides(std::istream& in) {
  DefectOverrides out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line.rfind("material_id", 0) == 0) continue;
    std::istringstream fields(line);
    std::string id, z, n;
    if (!std::getline(fields, id, ',') || !std::getline(fields, z, ',') || !std::getline(fields, n))
      fail(ErrorKind::Parse, "overrides line " + std::to_string(line_no) + ": expected 3 columns");
    const double z_eff = parse_number("z_eff", trim(z));
    const double n_cm3 = parse_number("n_def_per_cm3", trim(n));
    if (n_cm3 < 0.0) fail(ErrorKind::Parse, "overrides line " + std::to_string(line_no) + ": negative density");
    out[trim(id)].add({z_eff, n_cm3 * units::kPerCm3});
  }
  return out;
}

DefectOverrides load_overrides(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open overrides file " + path.string());
  return parse_overrides(in);
}

HostMaterial to_host_material(const RawRecord& r, DielectricSource source) {
  auto missing = [&](const char* what) {
    fail(ErrorKind::InvalidArgument, "record " + r.key() + ": missing " + what);
  };
  if (r.parse_error) fail(ErrorKind::Parse, "record " + r.key() + ": " + *r.parse_error);
  if (!r.formula) missing("formula");
  if (!r.density_g_per_cm3) missing("density_g_per_cm3");
  if (!r.bulk_modulus_vrh_gpa || !r.shear_modulus_vrh_gpa) missing("elastic moduli");
  const auto& eps = source == DielectricSource::Total ? r.dielectric_total : r.dielectric_electronic;
  if (!eps) missing("dielectric tensor");

  double site_density = 0.0;
  if (r.natoms && r.volume_angstrom3) {
    site_density = *r.natoms / (*r.volume_angstrom3 * units::kAngstrom3);
  } else if (r.site_density_per_m3) {
    site_density = *r.site_density_per_m3;
  } else {
    missing("natoms/volume_angstrom3 or site_density_per_m3");
  }

  return HostMaterial{
      .id = r.key(),
      .composition = parse_formula(*r.formula),
      .mass_density = *r.density_g_per_cm3 * units::kGramPerCm3,
      .site_density = site_density,
      .bulk_modulus = *r.bulk_modulus_vrh_gpa * units::kGPa,
      .shear_modulus = *r.shear_modulus_vrh_gpa * units::kGPa,
      .dielectric = *eps,
      .band_gap_pbe = r.band_gap_pbe_ev.value_or(0.0),
      .space_group = r.spacegroup_symbol.value_or(""),
      .centrosymmetric = r.is_centrosymmetric.value_or(false),
      .magnetic = r.is_magnetic.value_or(false),
  };
}

FilterResult apply_filters(const RawRecord& r, const ScreenConfig& cfg) {
  using R = ExclusionReason;
  if (r.parse_error) return Exclusion{R::InvalidData, *r.parse_error};
  if (!r.material_id) return Exclusion{R::InvalidData, "missing material_id"};
  if (!r.formula) return Exclusion{R::InvalidData, "missing formula"};
  if (!r.band_gap_pbe_ev || !std::isfinite(*r.band_gap_pbe_ev))
    return Exclusion{R::InvalidData, "missing band_gap_pbe_ev"};

  if (!(*r.band_gap_pbe_ev > cfg.gap_threshold_ev))
    return Exclusion{R::NoGap, "PBE gap " + format_sci6(*r.band_gap_pbe_ev) + " eV"};

  const bool magnetic_flag = r.is_magnetic.value_or(false);
  const double moment = std::abs(r.total_magnetization_mu_b.value_or(0.0));
  if (magnetic_flag || moment > cfg.magnetization_threshold_mu_b)
    return Exclusion{R::Magnetic, magnetic_flag ? "magnetic ordering" : "total magnetization " + format_sci6(moment)};

  if (!r.bulk_modulus_vrh_gpa || !r.shear_modulus_vrh_gpa)
    return Exclusion{R::MissingElastic, ""};
  const auto& eps = cfg.dielectric == DielectricSource::Total ? r.dielectric_total : r.dielectric_electronic;
  if (!eps) return Exclusion{R::MissingDielectric, ""};

  std::optional<HostMaterial> host;
  try {
    host = to_host_material(r, cfg.dielectric);
  } catch (const Error& e) {
    return Exclusion{R::InvalidData, e.what()};
  }
  if (const auto v = validate(*host); !v.empty()) {
    std::string detail;
    for (const auto& x : v) detail += (detail.empty() ? "" : "; ") + x.field + " " + x.message;
    return Exclusion{R::InvalidData, detail};
  }
  return std::move(*host);
}

double corrected_gap(double e_g_pbe) {
  require(std::isfinite(e_g_pbe) && e_g_pbe >= 0.0, "PBE gap must be >= 0");
  return 1.355 * e_g_pbe + 0.916;
}

double RowValues::omega_m_thz() const { return units::thz_from_angular(omega_m); }

ScreenSummary ScreenResult::summary() const {
  ScreenSummary s;
  s.included = included.size();
  s.total = included.size() + excluded.size();
  for (const auto& r : excluded) ++s.excluded[r.exclusion->reason];
  return s;
}

ScreenResult screen(std::span<const RawRecord> records, const ScreenConfig& cfg,
                    const DefectOverrides& overrides) {
  const double omega = cfg.omega();
  const DefectPopulation uniform = cfg.default_defects();
  const DeriveOptions opts = cfg.derive_options();

  std::vector<ScreeningRow> rows(records.size());
  detail::parallel_for(records.size(), cfg.threads, [&](std::size_t i) {
    const RawRecord& rec = records[i];
    ScreeningRow& row = rows[i];
    row.input_index = i;
    row.id = rec.key();
    row.formula = rec.formula.value_or("");
    row.space_group = rec.spacegroup_symbol.value_or("");
    row.centrosymmetric = rec.is_centrosymmetric.value_or(false);

    auto filtered = apply_filters(rec, cfg);
    if (auto* ex = std::get_if<Exclusion>(&filtered)) {
      row.exclusion = std::move(*ex);
      return;
    }
    const auto& host = std::get<HostMaterial>(filtered);
    try {
      const HostDerived d = derive_host(host, opts);
      auto it = overrides.find(row.id);
      const DefectPopulation& defects = it != overrides.end() ? it->second : uniform;
      RowValues v;
      v.omega_m = d.omega_m;
      v.n_r = d.n_r;
      v.a_c = d.a_c;
      v.tan_delta = loss_tangent(absorption_coefficient(defects, d.a_c, omega), d.n_r, omega);
      v.e_g_corrected = corrected_gap(host.band_gap_pbe);
      v.mean_mass = d.mean_mass;
      v.mass_density = host.mass_density;
      v.v_s = d.v_s;
      row.values = v;
    } catch (const Error& e) {
      row.exclusion = Exclusion{ExclusionReason::InvalidData, e.what()};
    }
  });

  ScreenResult out;
  for (auto& r : rows) (r.included() ? out.included : out.excluded).push_back(std::move(r));
  std::sort(out.included.begin(), out.included.end(), [](const ScreeningRow& a, const ScreeningRow& b) {
    if (a.values->a_c != b.values->a_c) return a.values->a_c < b.values->a_c;
    if (a.id != b.id) return a.id < b.id;
    return a.input_index < b.input_index;
  });
  return out;
}

std::optional<TableFormat> parse_table_format(std::string_view s) {
  if (s == "csv") return TableFormat::Csv;
  if (s == "text") return TableFormat::Text;
  if (s == "json") return TableFormat::Json;
  return std::nullopt;
}

std::string format_sci6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5e", v);
  return buf;
}

void write_table(std::ostream& out, std::span<const ScreeningRow> rows, TableFormat format) {
  static constexpr const char* kColumns[] = {"material_id", "material", "space_group",
                                             "centrosymmetric", "omega_m_thz", "n_r",
                                             "a_c_m_s", "tan_delta"};
  auto cells = [](const ScreeningRow& r) {
    const auto& v = *r.values;
    return std::vector<std::string>{r.id, r.formula, r.space_group,
                                    r.centrosymmetric ? "Y" : "N", format_sci6(v.omega_m_thz()),
                                    format_sci6(v.n_r), format_sci6(v.a_c),
                                    format_sci6(v.tan_delta)};
  };

  switch (format) {
    case TableFormat::Csv: {
      for (std::size_t i = 0; i < std::size(kColumns); ++i) out << (i ? "," : "") << kColumns[i];
      out << '\n';
      for (const auto& r : rows) {
        if (!r.included()) continue;
        const auto c = cells(r);
        for (std::size_t i = 0; i < c.size(); ++i) out << (i ? "," : "") << csv_field(c[i]);
        out << '\n';
      }
      break;
    }
    case TableFormat::Text: {
      std::vector<std::vector<std::string>> grid;
      grid.emplace_back(std::begin(kColumns), std::end(kColumns));
      for (const auto& r : rows)
        if (r.included()) grid.push_back(cells(r));
      std::vector<std::size_t> width(std::size(kColumns), 0);
      for (const auto& g : grid)
        for (std::size_t i = 0; i < g.size(); ++i) width[i] = std::max(width[i], g[i].size());
      for (const auto& g : grid) {
        std::string line;
        for (std::size_t i = 0; i < g.size(); ++i) {
          line += g[i];
          if (i + 1 < g.size()) line += std::string(width[i] - g[i].size() + 2, ' ');
        }
        out << line << '\n';
      }
      break;
    }
    case TableFormat::Json: {
      json arr = json::array();
      for (const auto& r : rows) {
        if (!r.included()) continue;
        const auto& v = *r.values;
        arr.push_back({{"material_id", r.id},
                       {"material", r.formula},
                       {"space_group", r.space_group},
                       {"centrosymmetric", r.centrosymmetric},
                       {"omega_m_thz", v.omega_m_thz()},
                       {"n_r", v.n_r},
                       {"a_c_m_s", v.a_c},
                       {"tan_delta", v.tan_delta},
                       {"e_g_corrected_ev", v.e_g_corrected}});
      }
      out << arr.dump(2) << '\n';
      break;
    }
  }
}

void write_debye_scatter(std::ostream& out, std::span<const ScreeningRow> rows) {
  out << "material_id,omega_m_thz,a_c_m_s\n";
  for (const auto& r : rows)
    if (r.included())
      out << csv_field(r.id) << ',' << format_sci6(r.values->omega_m_thz()) << ','
          << format_sci6(r.values->a_c) << '\n';
}

void write_gap_scatter(std::ostream& out, std::span<const ScreeningRow> rows) {
  out << "material_id,e_g_corrected_ev,a_c_m_s\n";
  for (const auto& r : rows)
    if (r.included())
      out << csv_field(r.id) << ',' << format_sci6(r.values->e_g_corrected) << ','
          << format_sci6(r.values->a_c) << '\n';
}

void write_exclusions(std::ostream& out, std::span<const ScreeningRow> rows) {
  out << "material_id,reason,detail\n";
  for (const auto& r : rows)
    if (!r.included())
      out << csv_field(r.id) << ',' << to_string(r.exclusion->reason) << ','
          << csv_field(r.exclusion->detail) << '\n';
}

}  // namespace defectloss
