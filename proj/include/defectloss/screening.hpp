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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "defectloss/loss_physics.hpp"
#include "defectloss/material.hpp"

namespace defectloss {

/// One line of the database export. Every field is optional at parse time;
/// parse_error is set when the line is not a JSON object of the right shape.
struct RawRecord {
  std::size_t line = 0;
  std::optional<std::string> material_id;
  std::optional<std::string> formula;
  std::optional<std::string> spacegroup_symbol;
  std::optional<bool> is_centrosymmetric;
  std::optional<double> band_gap_pbe_ev;
  std::optional<bool> is_magnetic;
  std::optional<double> total_magnetization_mu_b;
  std::optional<double> density_g_per_cm3;
  std::optional<int> natoms;
  std::optional<double> volume_angstrom3;
  std::optional<double> site_density_per_m3;
  std::optional<double> bulk_modulus_vrh_gpa;
  std::optional<double> shear_modulus_vrh_gpa;
  std::optional<Tensor3> dielectric_total;
  std::optional<Tensor3> dielectric_electronic;
  std::optional<std::string> parse_error;

  /// material_id, or "line:<n>" when the id is missing.
  std::string key() const;
};

RawRecord parse_record(std::string_view json_line, std::size_t line_no = 0);

/// Blank lines are skipped. Throws Error(Io) if the stream goes bad.
std::vector<RawRecord> read_records(std::istream& in);
std::vector<RawRecord> read_records(const std::filesystem::path& path);

enum class ExclusionReason { NoGap, Magnetic, MissingElastic, MissingDielectric, InvalidData };
std::string_view to_string(ExclusionReason r);

struct Exclusion {
  ExclusionReason reason;
  std::string detail;
};

enum class DielectricSource { Total, Electronic };

struct ScreenConfig {
  double frequency_ghz = 4.5;
  double n_def_per_cm3 = 1e18;
  double z_eff = 1.0;
  LocalFieldModel local_field = LocalFieldModel::Onsager;
  VelocityChoice velocity = VelocityChoice::Transverse;
  double gap_threshold_ev = 0.0;
  double magnetization_threshold_mu_b = 1e-3;
  DielectricSource dielectric = DielectricSource::Total;
  unsigned threads = 1;  // 0 = hardware concurrency

  double omega() const;
  DefectPopulation default_defects() const;
  DeriveOptions derive_options() const;
};

/// key = value lines; '#' starts a comment; string values may be quoted.
/// Unknown keys and malformed values throw Error(Parse).
ScreenConfig parse_screen_config(std::istream& in);
ScreenConfig load_screen_config(const std::filesystem::path& path);

/// Per-material defect chemistry replacing the uniform default population.
using DefectOverrides = std::map<std::string, DefectPopulation, std::less<>>;

/// CSV material_id,z_eff,n_def_per_cm3; one species per line, repeated ids
/// accumulate.
DefectOverrides parse_overrides(std::istream& in);
DefectOverrides load_overrides(const std::filesystem::path& path);

/// Database units to SI. Requires the structural fields; does not validate.
HostMaterial to_host_material(const RawRecord& r,
                              DielectricSource source = DielectricSource::Total);

using FilterResult = std::variant<HostMaterial, Exclusion>;

/// Exclusions are checked in order: InvalidData (unparseable line or missing
/// identity/structure), NoGap, Magnetic, MissingElastic, MissingDielectric,
/// then InvalidData again for records failing validate().
FilterResult apply_filters(const RawRecord& r, const ScreenConfig& cfg);

/// E_g = 1.355 E_g^PBE + 0.916 (eV).
double corrected_gap(double e_g_pbe);

struct RowValues {
  double omega_m = 0.0;    // rad/s
  double n_r = 0.0;
  double a_c = 0.0;        // m s
  double tan_delta = 0.0;
  double e_g_corrected = 0.0;  // eV
  double mean_mass = 0.0;  // kg
  double mass_density = 0.0;  // kg/m^3, as supplied by the record
  double v_s = 0.0;        // m/s

  double omega_m_thz() const;
};

struct ScreeningRow {
  std::size_t input_index = 0;
  std::string id;
  std::string formula;
  std::string space_group;
  bool centrosymmetric = false;
  std::optional<RowValues> values;
  std::optional<Exclusion> exclusion;

  bool included() const noexcept { return values.has_value(); }
};

struct ScreenSummary {
  std::size_t total = 0;
  std::size_t included = 0;
  std::map<ExclusionReason, std::size_t> excluded;
};

struct ScreenResult {
  /// Ascending by a_c, ties by id.
  std::vector<ScreeningRow> included;
  /// Input order.
  std::vector<ScreeningRow> excluded;

  ScreenSummary summary() const;
};

ScreenResult screen(std::span<const RawRecord> records, const ScreenConfig& cfg,
                    const DefectOverrides& overrides = {});

enum class TableFormat { Csv, Text, Json };
std::optional<TableFormat> parse_table_format(std::string_view s);

/// Six significant digits in scientific notation.
std::string format_sci6(double v);

void write_table(std::ostream& out, std::span<const ScreeningRow> rows,
                 TableFormat format = TableFormat::Csv);
/// material_id,omega_m_thz,a_c_m_s for included rows.
void write_debye_scatter(std::ostream& out, std::span<const ScreeningRow> rows);
/// material_id,e_g_corrected_ev,a_c_m_s for included rows.
void write_gap_scatter(std::ostream& out, std::span<const ScreeningRow> rows);
/// material_id,reason,detail for excluded rows.
void write_exclusions(std::ostream& out, std::span<const ScreeningRow> rows);

}  // namespace defectloss
