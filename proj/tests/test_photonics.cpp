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

#include <catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include <boost/math/tools/minima.hpp>

#include "hcnot/errors.hpp"
#include "hcnot/photonics.hpp"

using namespace hcnot;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("fibre-to-waveguide coupling numbers", "[photonics]") {
  const GaussianMode guide = GaussianMode::from_diameters(8.0, 11.0);
  REQUIRE(guide.wx == 4.0);
  REQUIRE(guide.wy == 5.5);
  const double smf = overlap_efficiency(GaussianMode::circular_diameter(5.0), guide);
  const double tec = overlap_efficiency(GaussianMode::circular_diameter(10.0), guide);
  REQUIRE_THAT(smf, WithinAbs(0.677, 5e-4));
  REQUIRE_THAT(tec, WithinAbs(0.971, 5e-4));
  REQUIRE_THAT(improvement_ratio(tec, smf), WithinAbs(0.434, 5e-4));
  REQUIRE_THAT(improvement_ratio(0.96, 0.68), WithinAbs(0.412, 5e-4));
  REQUIRE(improvement_ratio(0.5, 0.5) == 0.0);
}

TEST_CASE("overlap is symmetric, factorizes and peaks at identity", "[photonics][property]") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> r(0.5, 20.0);
  for (int k = 0; k < 1000; ++k) {
    const GaussianMode a{r(rng), r(rng)};
    const GaussianMode b{r(rng), r(rng)};
    const double ab = overlap_efficiency(a, b);
    REQUIRE(ab == overlap_efficiency(b, a));
    REQUIRE(ab > 0.0);
    REQUIRE(ab <= 1.0);
    REQUIRE_THAT(overlap_efficiency(a, a), WithinAbs(1.0, 1e-15));
    REQUIRE_THAT(ab, WithinRel(overlap_efficiency_1d(a.wx, b.wx) * overlap_efficiency_1d(a.wy, b.wy),
                               1e-14));
  }
  REQUIRE_THROWS_AS(overlap_efficiency({0.0, 1.0}, {1.0, 1.0}), ParameterError);
}

TEST_CASE("cross coupling follows sin^2 of the coupling phase", "[photonics]") {
  CouplerSpec s;
  s.kappa_H = 1.0;
  s.kappa_V = 0.5;
  s.length_mm = std::numbers::pi / 2.0;
  REQUIRE_THAT(cross_coupling(s, Pol::H, s.design_wavelength_nm), WithinAbs(1.0, 1e-15));
  s.length_mm = std::numbers::pi;
  REQUIRE_THAT(cross_coupling(s, Pol::H, s.design_wavelength_nm), WithinAbs(0.0, 1e-15));
  // The design point: H returns, V transfers.
  REQUIRE_THAT(cross_coupling(s, Pol::V, s.design_wavelength_nm), WithinAbs(1.0, 1e-15));
  s.dkappa_H = 0.01;
  REQUIRE(cross_coupling(s, Pol::H, s.design_wavelength_nm + 1.0) > 0.0);
}

TEST_CASE("commensurate coupling ratios give exact PBS designs", "[photonics]") {
  for (int m = 1; m <= 4; ++m) {
    for (int n = 0; n <= 4; ++n) {
      const double kv = 0.5;
      const double kh = kv * 2.0 * m / (2.0 * n + 1.0);
      const PbsDesign d = design_pbs(kh, kv, 30.0);
      INFO("m=" << m << " n=" << n);
      REQUIRE(d.leakage < 1e-12);
      REQUIRE(d.meets_threshold);
      REQUIRE(d.spec.length_mm <= 30.0);
    }
  }
  const PbsDesign two = design_pbs(1.0, 0.5, 20.0);
  REQUIRE_THAT(two.spec.length_mm, WithinAbs(std::numbers::pi, 1e-9));
}

TEST_CASE("a near-commensurate ratio matches a dense-scan oracle", "[photonics]") {
  const double kh = 1.015, kv = 0.5, lmax = 20.0;
  const PbsDesign d = design_pbs(kh, kv, lmax);
  // Oracle: fine scan plus Brent polishing of the best cell.
  auto eps = [&](double l) {
    return std::pow(std::sin(kh * l), 2) + std::pow(std::cos(kv * l), 2);
  };
  const int n = 400000;
  double best_l = 0.0, best = 10.0;
  for (int i = 1; i <= n; ++i) {
    const double l = lmax * i / n;
    if (eps(l) < best) {
      best = eps(l);
      best_l = l;
    }
  }
  const auto [l, v] = boost::math::tools::brent_find_minima(
      eps, best_l - lmax / n, std::min(lmax, best_l + lmax / n), 50);
  REQUIRE(d.leakage > 0.0);
  REQUIRE(d.leakage < 1e-3);
  REQUIRE_THAT(d.leakage, WithinAbs(v, 1e-12));
  REQUIRE_THAT(d.spec.length_mm, WithinAbs(l, 1e-6));
  REQUIRE_THAT(d.leakage, WithinAbs(d.leakage_H + d.leakage_V, 1e-15));
}

TEST_CASE("longer devices never design worse", "[photonics][property]") {
  const double kh = std::sqrt(2.0), kv = 0.5;
  double last = 10.0;
  for (double lmax : {5.0, 10.0, 20.0, 40.0, 80.0}) {
    const PbsDesign d = design_pbs(kh, kv, lmax);
    REQUIRE(d.leakage <= last + 1e-15);
    last = d.leakage;
  }
  REQUIRE(last < 0.01);
}

TEST_CASE("unreachable thresholds are reported", "[photonics]") {
  const PbsDesign d = design_pbs(std::sqrt(2.0), 0.5, 2.0, 1e-9);
  REQUIRE_FALSE(d.meets_threshold);
  REQUIRE(d.leakage > 1e-9);
  REQUIRE_THROWS_AS(design_pbs(1.0, 1.0, 10.0), ParameterError);
}

TEST_CASE("extinction over bandwidth", "[photonics]") {
  const CouplerSpec exact = design_pbs(1.0, 0.5, 20.0).spec;
  REQUIRE(extinction_over_bandwidth(exact, 0.0) == kExtinctionCap);
  REQUIRE(extinction_over_bandwidth(exact, 3.0) == kExtinctionCap);  // no dispersion

  const CouplerSpec cal = calibrate_dispersion(exact, 50.0, 3.0);
  REQUIRE_THAT(extinction_over_bandwidth(cal, 3.0), WithinRel(50.0, 1e-9));
  REQUIRE(cal.dkappa_H > 0.0);
  REQUIRE_THAT(cal.dkappa_H / cal.dkappa_V, WithinRel(2.0, 1e-12));

  double last = kExtinctionCap + 1.0;
  for (double bw = 0.0; bw <= 20.0; bw += 0.25) {
    const double e = extinction_over_bandwidth(cal, bw);
    REQUIRE(e <= last);
    last = e;
  }
  last = kExtinctionCap + 1.0;
  for (double scale = 0.0; scale <= 3.0; scale += 0.1) {
    CouplerSpec s = cal;
    s.dkappa_H *= scale;
    s.dkappa_V *= scale;
    const double e = extinction_over_bandwidth(s, 3.0);
    REQUIRE(e <= last);
    last = e;
  }
}
