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

#include "defectloss/composition.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>
#include <vector>

#include "defectloss/constants.hpp"
#include "defectloss/error.hpp"

namespace defectloss {
namespace assets {
extern const std::string_view atomic_masses_csv;
}

namespace {

struct ElementEntry {
  std::string symbol;
  double weight_amu;
};

// Table order follows the CSV (atomic number).
const std::vector<ElementEntry>& element_table() {
  static const std::vector<ElementEntry> table = [] {
    std::vector<ElementEntry> t;
    std::istringstream in{std::string(assets::atomic_masses_csv)};
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto comma = line.find(',');
      t.push_back({line.substr(0, comma), std::stod(line.substr(comma + 1))});
    }
    return t;
  }();
  return table;
}

const ElementEntry* find_element(std::string_view symbol) {
  for (const auto& e : element_table())
    if (e.symbol == symbol) return &e;
  return nullptr;
}

}  // namespace

Composition::Composition(Counts counts) : counts_(std::move(counts)) {
  require(!counts_.empty(), "composition has no elements");
  for (const auto& [symbol, n] : counts_) {
    require(n > 0, "non-positive count for element " + symbol);
    require(find_element(symbol) != nullptr, "unknown element symbol '" + symbol + "'");
  }
}

int Composition::atoms_per_formula_unit() const noexcept {
  int total = 0;
  for (const auto& [_, n] : counts_) total += n;
  return total;
}

Composition parse_formula(std::string_view text) {
  if (text.empty()) fail(ErrorKind::Parse, "empty formula");
  Composition::Counts counts;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '(' || c == ')')
      fail(ErrorKind::Parse, "parenthesized groups are not supported: " + std::string(text));
    if (!std::isupper(static_cast<unsigned char>(c)))
      fail(ErrorKind::Parse, "expected element symbol at position " + std::to_string(i) +
                                 " in '" + std::string(text) + "'");
    std::size_t j = i + 1;
    while (j < text.size() && std::islower(static_cast<unsigned char>(text[j]))) ++j;
    std::string symbol(text.substr(i, j - i));
    if (find_element(symbol) == nullptr)
      fail(ErrorKind::Parse, "unknown element symbol '" + symbol + "'");

    int count = 1;
    if (j < text.size() && (std::isdigit(static_cast<unsigned char>(text[j])) || text[j] == '-')) {
      std::size_t k = j;
      if (text[k] == '-') ++k;
      while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) ++k;
      auto [ptr, ec] = std::from_chars(text.data() + j, text.data() + k, count);
      if (ec != std::errc() || ptr != text.data() + k)
        fail(ErrorKind::Parse, "bad count for '" + symbol + "'");
      if (count <= 0) fail(ErrorKind::Parse, "non-positive count for '" + symbol + "'");
      j = k;
    }
    counts[symbol] += count;
    i = j;
  }
  return Composition(std::move(counts));
}

// Electronegative elements, written last in this order; all others precede
// them by atomic number.
constexpr std::string_view kAnionOrder[] = {"B",  "Si", "C",  "Sb", "As", "P",  "N", "H", "Te",
                                            "Se", "S",  "At", "I",  "Br", "Cl", "O", "F"};

std::string to_formula(const Composition& c) {
  std::string out;
  auto emit = [&](std::string_view symbol) {
    auto it = c.counts().find(symbol);
    if (it == c.counts().end()) return;
    out += symbol;
    if (it->second > 1) out += std::to_string(it->second);
  };
  for (const auto& e : element_table())
    if (std::find(std::begin(kAnionOrder), std::end(kAnionOrder), e.symbol) == std::end(kAnionOrder))
      emit(e.symbol);
  for (auto symbol : kAnionOrder) emit(symbol);
  return out;
}

std::optional<double> standard_atomic_weight(std::string_view symbol) {
  if (const auto* e = find_element(symbol)) return e->weight_amu;
  return std::nullopt;
}

double average_atomic_mass_amu(const Composition& c) {
  double mass = 0.0;
  for (const auto& [symbol, n] : c.counts()) mass += n * find_element(symbol)->weight_amu;
  return mass / c.atoms_per_formula_unit();
}

double average_atomic_mass(const Composition& c) {
  return units::amu_to_kg(average_atomic_mass_amu(c));
}

}  // namespace defectloss
