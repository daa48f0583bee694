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

#include <numbers>

namespace defectloss {

/// CODATA-2018 values in SI units.
struct PhysicalConstants {
  double hbar;   // J s
  double c;      // m/s
  double e;      // C
  double eps0;   // F/m
  double kB;     // J/K
  double alpha;  // fine-structure constant
  double amu;    // kg
};

inline constexpr double kPi = std::numbers::pi;

namespace detail {
inline constexpr double kPlanck = 6.62607015e-34;
inline constexpr double kHbar = kPlanck / (2.0 * kPi);
inline constexpr double kLight = 299792458.0;
inline constexpr double kCharge = 1.602176634e-19;
inline constexpr double kAlpha = 7.2973525693e-3;
}  // namespace detail

// h, c, e and k_B are exact; eps0 follows from alpha so the two agree exactly.
inline constexpr PhysicalConstants kCodata2018{
    .hbar = detail::kHbar,
    .c = detail::kLight,
    .e = detail::kCharge,
    .eps0 = detail::kCharge * detail::kCharge /
            (4.0 * kPi * detail::kAlpha * detail::kHbar * detail::kLight),
    .kB = 1.380649e-23,
    .alpha = detail::kAlpha,
    .amu = 1.66053906660e-27,
};

// Conversions from database-native units into SI. Everything past the
// ingestion boundary is SI.
namespace units {

inline constexpr double kGPa = 1.0e9;                  // Pa
inline constexpr double kGramPerCm3 = 1.0e3;           // kg/m^3
inline constexpr double kAngstrom3 = 1.0e-30;          // m^3
inline constexpr double kPerCm3 = 1.0e6;               // 1/m^3
inline constexpr double kElectronVolt = 1.602176634e-19;  // J
inline constexpr double kGHz = 1.0e9;                  // Hz
inline constexpr double kTHz = 1.0e12;                 // Hz

constexpr double angular_from_ghz(double f_ghz) { return 2.0 * kPi * f_ghz * kGHz; }
constexpr double thz_from_angular(double omega) { return omega / (2.0 * kPi * kTHz); }
constexpr double amu_to_kg(double m_amu) { return m_amu * kCodata2018.amu; }

}  // namespace units
}  // namespace defectloss
