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

#include "defectloss/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

// pchip.hpp calls isnan unqualified; older Boost releases rely on it being
// visible at global scope.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "defectloss/constants.hpp"
#include "defectloss/error.hpp"
#include "parallel.hpp"

namespace defectloss {

namespace {

using Spline = boost::math::interpolators::pchip<std::vector<double>>;

constexpr double kQuadTolerance = 1e-13;
constexpr unsigned kQuadMaxDepth = 30;

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;

// Adaptive bisection on a 15-point Kronrod rule. A panel is accepted when its
// error estimate meets either the relative tolerance or its share of the
// absolute floor, so integrands that cancel to rounding noise terminate.
template <class F>
double adaptive_kronrod(F& f, double a, double b, double abs_floor, unsigned depth) {
  double err = 0.0;
  const double est = Kronrod::integrate(f, a, b, 0, 0.0, &err);
  if (depth == 0 || err <= std::max(kQuadTolerance * std::abs(est), abs_floor)) return est;
  const double mid = 0.5 * (a + b);
  return adaptive_kronrod(f, a, mid, 0.5 * abs_floor, depth - 1) +
         adaptive_kronrod(f, mid, b, 0.5 * abs_floor, depth - 1);
}

template <class F>
double gauss_kronrod(F&& f, double a, double b, double abs_floor = 0.0) {
  if (!(b > a)) return 0.0;
  return adaptive_kronrod(f, a, b, abs_floor, kQuadMaxDepth);
}

template <class G>
double integrate_in_root(G&& g, double a, double b, double abs_floor = 0.0) {
  const double ta = std::sqrt(a);
  const double tb = std::sqrt(b);
  return gauss_kronrod([&](double t) { return 2.0 * t * g(t * t, t); }, ta, tb, abs_floor);
}

}  // namespace

struct SpectralDensity::Impl {
  bool debye = false;
  double omega_m = 0.0;
  double mu_max = 0.0;

  std::vector<double> mu;
  std::vector<double> nu;
  Interpolation interp = Interpolation::MonotoneCubic;
  double low_power = 0.5;
  std::optional<Spline> spline;

  void build_spline() {
    spline.reset();
    if (interp == Interpolation::MonotoneCubic) spline.emplace(std::vector<double>(mu), std::vector<double>(nu));
  }

  double interior(double m) const {
    if (spline) return std::max(0.0, (*spline)(m));
    auto hi = std::upper_bound(mu.begin(), mu.end(), m);
    if (hi == mu.end()) return nu.back();
    const auto i = static_cast<std::size_t>(hi - mu.begin());
    const double w = (m - mu[i - 1]) / (mu[i] - mu[i - 1]);
    return (1.0 - w) * nu[i - 1] + w * nu[i];
  }

  double eval(double m) const {
    if (!(m > 0.0) || m > mu_max) return 0.0;
    if (debye) return 1.5 * std::sqrt(m) / (omega_m * omega_m * omega_m);
    if (m < mu.front()) return nu.front() * std::pow(m / mu.front(), low_power);
    return interior(m);
  }

  double integral() const {
    if (debye) return 1.0;  // exact: integral of 3 sqrt(mu)/(2 w^3) over [0, w^2]
    double total = nu.front() * mu.front() / (low_power + 1.0);
    for (std::size_t i = 0; i + 1 < mu.size(); ++i)
      total += gauss_kronrod([this](double m) { return interior(m); }, mu[i], mu[i + 1]);
    return total;
  }
};

SpectralDensity::SpectralDensity(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
SpectralDensity::SpectralDensity(const SpectralDensity& o)
    : impl_(std::make_unique<Impl>(*o.impl_)) {}
SpectralDensity::SpectralDensity(SpectralDensity&&) noexcept = default;
SpectralDensity& SpectralDensity::operator=(const SpectralDensity& o) {
  if (this != &o) impl_ = std::make_unique<Impl>(*o.impl_);
  return *this;
}
SpectralDensity& SpectralDensity::operator=(SpectralDensity&&) noexcept = default;
SpectralDensity::~SpectralDensity() = default;

SpectralDensity SpectralDensity::debye(double omega_m) {
  require(std::isfinite(omega_m) && omega_m > 0.0, "Debye frequency must be > 0");
  auto impl = std::make_unique<Impl>();
  impl->debye = true;
  impl->omega_m = omega_m;
  impl->mu_max = omega_m * omega_m;
  return SpectralDensity(std::move(impl));
}

SpectralDensity SpectralDensity::tabulated(std::vector<double> mu, std::vector<double> nu,
                                           Interpolation interp, double low_power) {
  require(mu.size() == nu.size(), "tabulated density: size mismatch");
  const std::size_t min_points = interp == Interpolation::MonotoneCubic ? 4 : 2;
  require(mu.size() >= min_points, "tabulated density: too few points");
  require(std::isfinite(low_power) && low_power > -1.0,
          "tabulated density: low-end power law is not integrable");
  require(std::isfinite(mu.front()) && mu.front() > 0.0, "tabulated density: first knot must be > 0");
  for (std::size_t i = 0; i < mu.size(); ++i) {
    require(std::isfinite(nu[i]) && nu[i] >= 0.0, "tabulated density: negative or non-finite value");
    if (i > 0) require(mu[i] > mu[i - 1], "tabulated density: knots not strictly increasing");
  }
  auto impl = std::make_unique<Impl>();
  impl->mu = std::move(mu);
  impl->nu = std::move(nu);
  impl->interp = interp;
  impl->low_power = low_power;
  impl->mu_max = impl->mu.back();
  impl->build_spline();

  const double total = impl->integral();
  require(std::isfinite(total) && total > 0.0, "tabulated density: zero total weight");
  for (double& v : impl->nu) v /= total;
  impl->build_spline();
  return SpectralDensity(std::move(impl));
}

double SpectralDensity::operator()(double mu) const { return impl_->eval(mu); }
double SpectralDensity::mu_max() const noexcept { return impl_->mu_max; }
bool SpectralDensity::is_debye() const noexcept { return impl_->debye; }
double SpectralDensity::debye_omega() const noexcept { return impl_->debye ? impl_->omega_m : 0.0; }
std::span<const double> SpectralDensity::knots() const noexcept { return impl_->mu; }
double SpectralDensity::integral() const { return impl_->integral(); }

SpectralDensity nu_from_dos(std::span<const double> omega, std::span<const double> rho,
                            Interpolation interp) {
  require(omega.size() == rho.size(), "DOS table: column length mismatch");
  std::vector<double> mu;
  std::vector<double> nu;
  std::vector<double> w_pos;
  std::vector<double> rho_pos;
  for (std::size_t i = 0; i < omega.size(); ++i) {
    require(std::isfinite(omega[i]) && omega[i] >= 0.0, "DOS table: negative frequency");
    require(std::isfinite(rho[i]) && rho[i] >= 0.0, "DOS table: negative density of states");
    if (omega[i] == 0.0) continue;
    w_pos.push_back(omega[i]);
    rho_pos.push_back(rho[i]);
    mu.push_back(omega[i] * omega[i]);
    nu.push_back(rho[i] / (2.0 * omega[i]));
  }
  require(w_pos.size() >= 2, "DOS table: need at least two positive frequencies");

  // rho ~ omega^p near zero gives nu ~ mu^((p-1)/2).
  double low_power = 0.5;
  if (rho_pos[0] > 0.0 && rho_pos[1] > 0.0) {
    const double p = std::log(rho_pos[1] / rho_pos[0]) / std::log(w_pos[1] / w_pos[0]);
    if (!(p > -1.0))
      fail(ErrorKind::InvalidArgument,
           "DOS diverges at omega = 0 as omega^" + std::to_string(p) +
               "; nu(mu) would not be integrable");
    low_power = 0.5 * (p - 1.0);
  }
  return SpectralDensity::tabulated(std::move(mu), std::move(nu), interp, low_power);
}

double pv_integral(const SpectralDensity& nu, double z) {
  require(std::isfinite(z), "z must be finite");
  const double mu_max = nu.mu_max();
  if (z == 0.0 || z == mu_max)
    fail(ErrorKind::InvalidArgument, "z at a support boundary: principal value undefined");

  std::vector<double> breaks{0.0};
  for (double k : nu.knots())
    if (k > 0.0 && k < mu_max) breaks.push_back(k);
  breaks.push_back(mu_max);

  if (z < 0.0 || z > mu_max) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
      total += integrate_in_root(
          [&](double m, double) { return nu(m) / (m - z); }, breaks[i], breaks[i + 1]);
    return total;
  }

  if (z > mu_max * (1.0 - kUpperEdgeExclusion))
    fail(ErrorKind::InvalidArgument, "z within the excluded band below mu_max");

  breaks.push_back(z);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  const double nu_z = nu(z);
  const double root_z = std::sqrt(z);
  // (nu(mu) - nu(z)) / (mu - z) is bounded across mu = z; splitting there keeps
  // the quadrature nodes off the removable singularity.
  auto remainder = [&](double m, double t) {
    return (nu(m) - nu_z) / ((t - root_z) * (t + root_z));
  };
  // The result is of order 1/mu_max; that fixes the absolute floor per panel.
  const double root_max = std::sqrt(mu_max);
  const double floor_total = kQuadTolerance / mu_max;
  double smooth = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double share = (std::sqrt(breaks[i + 1]) - std::sqrt(breaks[i])) / root_max;
    smooth += integrate_in_root(remainder, breaks[i], breaks[i + 1], floor_total * share);
  }
  return smooth + nu_z * std::log((mu_max - z) / z);
}

double chi_squared(const MassDefectParams& p, const SpectralDensity& nu) {
  require(std::isfinite(p.eps_mass) && p.eps_mass < 1.0,
          "mass parameter must be < 1 (defect mass > 0)");
  require(std::isfinite(p.n_atoms) && p.n_atoms >= 1.0, "N_a must be >= 1");
  require(p.z > 0.0 && p.z < nu.mu_max(), "z must lie inside the open support");
  if (p.eps_mass == 0.0) return 1.0 / p.n_atoms;
  const double pv = pv_integral(nu, p.z);
  const double nz = nu(p.z);
  const double resonant = kPi * p.eps_mass * p.z * nz;
  const double bracket = 1.0 + p.eps_mass * p.z * pv;
  return 1.0 / (p.n_atoms * (resonant * resonant + bracket * bracket));
}

AcousticLimit acoustic_limit_check(const SpectralDensity& nu, double eps_mass, double n_atoms) {
  constexpr int kFirst = 4;
  constexpr int kLast = 8;
  constexpr int kLevels = 3;  // Richardson in z^1, z^2
  constexpr int n = kLast - kFirst + 1;
  double table[n][kLevels] = {};
  for (int i = 0; i < n; ++i) {
    const double z = nu.mu_max() * std::pow(10.0, -(kFirst + i));
    table[i][0] = n_atoms * chi_squared({eps_mass, n_atoms, z}, nu);
    for (int j = 1; j < kLevels && j <= i; ++j) {
      const double r = std::pow(10.0, j);
      table[i][j] = (r * table[i][j - 1] - table[i - 1][j - 1]) / (r - 1.0);
    }
  }
  const double value = table[n - 1][kLevels - 1];
  const double error = std::max(std::abs(value - table[n - 1][kLevels - 2]),
                                std::abs(value - table[n - 2][kLevels - 1]));
  if (!std::isfinite(value) || !std::isfinite(error) || error > 1e-3)
    fail(ErrorKind::Numerical, "acoustic limit did not converge (estimate " +
                                   std::to_string(value) + ", error " + std::to_string(error) + ")");
  return {value, error};
}

std::vector<ChiSample> chi_sweep(const SpectralDensity& nu, double eps_mass,
                                 std::span<const double> z, unsigned threads) {
  std::vector<ChiSample> out(z.size());
  detail::parallel_for(z.size(), threads, [&](std::size_t i) {
    out[i] = {z[i], chi_squared({eps_mass, 1.0, z[i]}, nu), pv_integral(nu, z[i])};
  });
  return out;
}

DosTable parse_dos_csv(std::istream& in) {
  DosTable t;
  std::string line;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (line.find("omega") != std::string::npos) continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      fail(ErrorKind::Parse, "DOS CSV line " + std::to_string(line_no) + ": expected two columns");
    try {
      std::size_t used = 0;
      const double w = std::stod(line.substr(0, comma), &used);
      const double r = std::stod(line.substr(comma + 1));
      t.omega.push_back(w);
      t.rho.push_back(r);
    } catch (const std::exception&) {
      fail(ErrorKind::Parse, "DOS CSV line " + std::to_string(line_no) + ": not a number");
    }
  }
  return t;
}

DosTable read_dos_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open DOS file " + path.string());
  return parse_dos_csv(in);
}

void write_chi_sweep_csv(std::ostream& out, std::span<const ChiSample> rows) {
  out << "z,chi2_times_Na,pv_value\n";
  char buf[96];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.10e,%.10e,%.10e\n", r.z, r.chi2_times_na, r.pv_value);
    out << buf;
  }
}

}  // namespace defectloss
