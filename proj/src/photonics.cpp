// Copyright 2026 The hcnot Authors
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

#include "hcnot/photonics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "hcnot/errors.hpp"

namespace hcnot {

GaussianMode GaussianMode::from_diameters(double mfd_x, double mfd_y) {
  GaussianMode m{mfd_x / 2.0, mfd_y / 2.0};
  m.validate();
  return m;
}

GaussianMode GaussianMode::circular_diameter(double mfd) { return from_diameters(mfd, mfd); }

void GaussianMode::validate() const {
  if (!(wx > 0.0) || !(wy > 0.0) || !std::isfinite(wx) || !std::isfinite(wy)) {
    throw ParameterError("GaussianMode radii must be positive and finite");
  }
}

double overlap_efficiency_1d(double w1, double w2) {
  if (!(w1 > 0.0) || !(w2 > 0.0)) throw ParameterError("mode radii must be positive");
  return 2.0 * w1 * w2 / (w1 * w1 + w2 * w2);
}

double overlap_efficiency(const GaussianMode& m1, const GaussianMode& m2) {
  m1.validate();
  m2.validate();
  return overlap_efficiency_1d(m1.wx, m2.wx) * overlap_efficiency_1d(m1.wy, m2.wy);
}

double improvement_ratio(double eta_new, double eta_old) {
  if (!(eta_old > 0.0)) throw ParameterError("improvement_ratio: eta_old must be positive");
  return eta_new / eta_old - 1.0;
}

void CouplerSpec::validate() const {
  if (!(kappa_H > 0.0) || !(kappa_V > 0.0)) {
    throw ParameterError("coupling rates must be positive");
  }
  if (!(length_mm >= 0.0)) throw ParameterError("coupler length must be non-negative");
  if (!(design_wavelength_nm > 0.0)) throw ParameterError("design wavelength must be positive");
  if (!std::isfinite(dkappa_H) || !std::isfinite(dkappa_V)) {
    throw ParameterError("dispersion must be finite");
  }
}

double CouplerSpec::kappa(Pol p, double wavelength_nm) const {
  const double dl = wavelength_nm - design_wavelength_nm;
  return p == Pol::H ? kappa_H + dl * dkappa_H : kappa_V + dl * dkappa_V;
}

double cross_coupling(const CouplerSpec& spec, Pol p, double wavelength_nm) {
  spec.validate();
  const double s = std::sin(spec.kappa(p, wavelength_nm) * spec.length_mm);
  return s * s;
}

namespace {

double leakage_at(double kh, double kv, double length) {
  const double s = std::sin(kh * length);
  const double c = std::cos(kv * length);
  return s * s + c * c;
}

}  // namespace

double pbs_leakage(const CouplerSpec& spec) {
  spec.validate();
  return leakage_at(spec.kappa_H, spec.kappa_V, spec.length_mm);
}

PbsDesign design_pbs(double kappa_H, double kappa_V, double max_length_mm, double threshold) {
  if (!(kappa_H > 0.0) || !(kappa_V > 0.0)) throw ParameterError("coupling rates must be positive");
  if (kappa_H == kappa_V) throw ParameterError("design_pbs: kappa_H must differ from kappa_V");
  if (!(max_length_mm > 0.0)) throw ParameterError("design_pbs: max_length must be positive");

  const double kh = kappa_H, kv = kappa_V;
  auto eps = [&](double l) { return leakage_at(kh, kv, l); };
  auto slope = [&](double l) {
    return std::pair{kh * std::sin(2 * kh * l) - kv * std::sin(2 * kv * l),
                     2 * kh * kh * std::cos(2 * kh * l) - 2 * kv * kv * std::cos(2 * kv * l)};
  };

  // Resolve every local minimum: the grid step is a small fraction of the
  // fastest oscillation period.
  const double step = std::numbers::pi / (2.0 * std::max(kh, kv)) / 64.0;
  const auto n = static_cast<std::size_t>(std::ceil(max_length_mm / step));
  const double h = max_length_mm / static_cast<double>(n);
  std::vector<double> grid(n + 1);
  for (std::size_t i = 0; i <= n; ++i) grid[i] = eps(static_cast<double>(i) * h);

  double best_l = max_length_mm, best = grid[n];
  for (std::size_t i = 1; i <= n; ++i) {
    const bool left = grid[i] <= grid[i - 1];
    const bool right = i == n || grid[i] <= grid[i + 1];
    if (!left || !right) continue;
    const double lo = static_cast<double>(i - 1) * h;
    const double hi = std::min(max_length_mm, static_cast<double>(i + 1) * h);
    auto [l, v] = boost::math::tools::brent_find_minima(eps, lo, hi,
                                                         std::numeric_limits<double>::digits / 2);
    // Brent stalls near sqrt(machine eps); polish on the derivative.
    std::uintmax_t iters = 50;
    const double polished = boost::math::tools::newton_raphson_iterate(
        slope, l, lo, hi, std::numeric_limits<double>::digits - 4, iters);
    if (eps(polished) < v) {
      l = polished;
      v = eps(polished);
    }
    if (v < best - 1e-15 || (std::abs(v - best) <= 1e-15 && l < best_l)) {
      best = v;
      best_l = l;
    }
  }

  PbsDesign d;
  d.spec.kappa_H = kh;
  d.spec.kappa_V = kv;
  d.spec.length_mm = best_l;
  d.leakage_H = std::pow(std::sin(kh * best_l), 2);
  d.leakage_V = std::pow(std::cos(kv * best_l), 2);
  d.leakage = d.leakage_H + d.leakage_V;
  d.threshold = threshold;
  d.meets_threshold = d.leakage <= threshold;
  return d;
}

namespace {

// Mean of cos(2 theta) for theta uniform over [t0 - half, t0 + half].
double mean_cos2(double t0, double half) {
  if (half < 1e-12) return std::cos(2.0 * t0);
  return std::cos(2.0 * t0) * std::sin(2.0 * half) / (2.0 * half);
}

}  // namespace

double extinction_over_bandwidth(const CouplerSpec& spec, double bandwidth_nm) {
  spec.validate();
  if (!(bandwidth_nm >= 0.0)) throw ParameterError("bandwidth must be non-negative");
  const double l = spec.length_mm;
  const double half_h = std::abs(spec.dkappa_H) * l * bandwidth_nm / 2.0;
  const double half_v = std::abs(spec.dkappa_V) * l * bandwidth_nm / 2.0;
  const double wrong_h = 0.5 - 0.5 * mean_cos2(spec.kappa_H * l, half_h);
  const double wrong_v = 0.5 + 0.5 * mean_cos2(spec.kappa_V * l, half_v);
  const double wrong = std::max(0.0, 0.5 * (wrong_h + wrong_v));
  if (wrong * (1.0 + kExtinctionCap) <= 1.0) return kExtinctionCap;
  return (1.0 - wrong) / wrong;
}

CouplerSpec calibrate_dispersion(const CouplerSpec& spec, double target_ratio,
                                 double bandwidth_nm) {
  spec.validate();
  if (!(bandwidth_nm > 0.0)) throw ParameterError("calibration bandwidth must be positive");
  if (!(target_ratio > 0.0)) throw ParameterError("target ratio must be positive");

  auto with = [&](double d) {
    CouplerSpec s = spec;
    s.dkappa_H = d * spec.kappa_H;
    s.dkappa_V = d * spec.kappa_V;
    return s;
  };
  auto f = [&](double d) {
    return std::log(extinction_over_bandwidth(with(d), bandwidth_nm) / target_ratio);
  };
  if (f(0.0) <= 0.0) {
    throw EstimatorFailure("calibrate_dispersion: device is below target with no dispersion");
  }
  double hi = 1e-9;
  while (f(hi) > 0.0) {
    hi *= 2.0;
    if (hi > 1.0) throw EstimatorFailure("calibrate_dispersion: target not reachable");
  }
  std::uintmax_t iters = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      f, hi / 2.0, hi, boost::math::tools::eps_tolerance<double>(50), iters);
  return with(0.5 * (a + b));
}

}  // namespace hcnot
