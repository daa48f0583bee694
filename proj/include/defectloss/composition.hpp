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

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace defectloss {

/// Element symbol -> count per formula unit. Counts are positive integers.
class Composition {
 public:
  using Counts = std::map<std::string, int, std::less<>>;

  /// Throws Error(InvalidArgument) if empty, any count <= 0, or any symbol
  /// is missing from the bundled atomic-weight table.
  explicit Composition(Counts counts);

  const Counts& counts() const noexcept { return counts_; }
  int atoms_per_formula_unit() const noexcept;

  bool operator==(const Composition&) const = default;

 private:
  Counts counts_;
};

/// Parses formulas such as "Al2O3", "C", "Si3N4". Repeated symbols are
/// summed ("HOH" -> {H:2, O:1}). Parenthesized groups are rejected.
Composition parse_formula(std::string_view text);

/// Hill-like canonical string: elements in table order with counts > 1.
std::string to_formula(const Composition& c);

/// Standard atomic weight in amu from the bundled IUPAC-2021 table.
std::optional<double> standard_atomic_weight(std::string_view symbol);

/// Count-weighted mean atomic mass in kg.
double average_atomic_mass(const Composition& c);

/// Same, in amu.
double average_atomic_mass_amu(const Composition& c);

}  // namespace defectloss
