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

#include "hcnot/errors.hpp"
#include "hcnot/protocol.hpp"
#include "hcnot/tomography.hpp"
#include "oracles.hpp"

using namespace hcnot;
using Catch::Matchers::WithinAbs;

namespace {

bool physical(const DensityMatrix2Q& rho) {
  if ((rho - rho.adjoint()).norm() > 1e-9) return false;
  if (std::abs(rho.trace() - Complex(1.0)) > 1e-9) return false;
  Eigen::SelfAdjointEigenSolver<DensityMatrix2Q> es(rho);
  return es.eigenvalues().minCoeff() >= -1e-9;
}

}  // namespace

TEST_CASE("settings enumerate H, D, L with the control outermost", "[tomography]") {
  const auto s = all_settings();
  REQUIRE(s[0].label() == "HH");
  REQUIRE(s[1].label() == "HD");
  REQUIRE(s[3].label() == "DH");
  REQUIRE(s[8].label() == "LL");
}

TEST_CASE("projectors are complete and orthogonal", "[tomography]") {
  for (const auto& s : all_settings()) {
    const auto p = projectors(s);
    DensityMatrix2Q sum = DensityMatrix2Q::Zero();
    for (std::size_t i = 0; i < 4; ++i) {
      sum += p[i];
      for (std::size_t j = 0; j < 4; ++j) {
        const double overlap = std::abs((p[i] * p[j]).trace());
        REQUIRE_THAT(overlap, WithinAbs(i == j ? 1.0 : 0.0, 1e-12));
      }
    }
    REQUIRE((sum - DensityMatrix2Q::Identity()).norm() < 1e-12);
  }
  const auto hv = projectors({Basis::HV, Basis::HV});
  REQUIRE_THAT(hv[2](2, 2).real(), WithinAbs(1.0, 1e-12));
  const auto da = projectors({Basis::DA, Basis::DA});
  REQUIRE((da[0] - DensityMatrix2Q::Constant(0.25)).norm() < 1e-12);
}

TEST_CASE("MLE recovers a Bell state from exact counts", "[tomography]") {
  const Eigen::Vector4cd phi = bell_vector(Bell::PhiPlus);
  const auto counts = expected_counts(phi * phi.adjoint(), 1e6);
  const MleResult r = mle_reconstruct(counts);
  REQUIRE(r.converged);
  REQUIRE(fidelity(r.rho, phi) >= 0.999);
  REQUIRE(physical(r.rho));
}

TEST_CASE("MLE of the maximally mixed state", "[tomography]") {
  const auto counts = expected_counts(DensityMatrix2Q::Identity() / 4.0, 1e6);
  const MleResult r = mle_reconstruct(counts);
  REQUIRE(purity(r.rho) <= 0.26);
  REQUIRE((r.rho - DensityMatrix2Q::Identity() / 4.0).norm() < 1e-6);
}

TEST_CASE("MLE round trip on random states", "[tomography][property]") {
  std::mt19937_64 rng(101);
  for (int k = 0; k < 40; ++k) {
    const DensityMatrix2Q rho = testing::random_density(1 + k % 4, rng);
    const MleResult r = mle_reconstruct(expected_counts(rho, 1e6));
    REQUIRE(trace_distance(r.rho, rho) < 0.01);
    REQUIRE(physical(r.rho));
    for (std::size_t i = 1; i < r.history.size(); ++i) {
      REQUIRE(r.history[i] >= r.history[i - 1]);
    }
  }
}

TEST_CASE("MLE stays physical on noisy and negative counts", "[tomography]") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g(0.0, 30.0);
  for (int k = 0; k < 20; ++k) {
    CountTable counts = expected_counts(testing::random_density(2, rng), 200.0);
    for (auto& c : counts) c += g(rng);
    const MleResult r = mle_reconstruct(counts);
    REQUIRE(physical(r.rho));
  }
  CountTable neg = expected_counts(DensityMatrix2Q::Identity() / 4.0, 100.0);
  neg[0] = -5.0;
  const MleResult r = mle_reconstruct(neg);
  REQUIRE_FALSE(r.warnings.empty());
}

TEST_CASE("MLE rejects an empty table", "[tomography]") {
  CountTable zero{};
  REQUIRE_THROWS_AS(mle_reconstruct(zero), EstimatorFailure);
}

TEST_CASE("MLE flags an iteration cap", "[tomography]") {
  const Eigen::Vector4cd phi = bell_vector(Bell::PsiMinus);
  MleOptions opt;
  opt.max_iterations = 3;
  const MleResult r = mle_reconstruct(expected_counts(phi * phi.adjoint(), 1e6), opt);
  REQUIRE_FALSE(r.converged);
  REQUIRE(r.iterations == 3);
  REQUIRE(physical(r.rho));
}

TEST_CASE("count tables are assembled from subtracted records", "[tomography]") {
  std::vector<CountRecord> rs;
  for (const auto& s : all_settings()) {
    for (const char* o : {"00", "01", "10", "11"}) {
      CountRecord r;
      r.setting = s.label();
      r.outcome = o;
      r.raw = 10;
      r.blocked_ct = 2;
      r.blocked_anc = 1;
      rs.push_back(r);
    }
  }
  const CountTable t = count_table_from_records(rs);
  for (double v : t) REQUIRE(v == 7.0);
  rs.pop_back();
  REQUIRE_THROWS_AS(count_table_from_records(rs), ParameterError);
}

TEST_CASE("fidelity examples", "[tomography]") {
  const Eigen::Vector4cd psi = bell_vector(Bell::PsiMinus);
  REQUIRE_THAT(fidelity(psi * psi.adjoint(), psi), WithinAbs(1.0, 1e-12));
  REQUIRE_THAT(fidelity(DensityMatrix2Q::Identity() / 4.0, psi), WithinAbs(0.25, 1e-12));
  // Werner-type mixture weighted so that the fidelity is exactly F.
  const double f = 0.945;
  const double p = (4.0 * f - 1.0) / 3.0;
  const DensityMatrix2Q werner =
      p * psi * psi.adjoint() + (1.0 - p) * DensityMatrix2Q::Identity() / 4.0;
  REQUIRE_THAT(fidelity(werner, psi), WithinAbs(0.945, 1e-12));
}

TEST_CASE("local phase compensation undoes a known rotation", "[tomography]") {
  const Eigen::Vector4cd phi = bell_vector(Bell::PhiPlus);
  const DensityMatrix2Q rho = apply_local_phases(phi * phi.adjoint(), 0.7, -1.9);
  const Compensation c = compensate_local_unitaries(rho, phi);
  REQUIRE(c.fidelity_before < 0.9);
  REQUIRE_THAT(c.fidelity_after, WithinAbs(1.0, 1e-6));
  REQUIRE_THAT(fidelity(c.rho, phi), WithinAbs(c.fidelity_after, 1e-12));
}

TEST_CASE("compensation leaves an optimal state alone", "[tomography]") {
  const Eigen::Vector4cd phi = bell_vector(Bell::PhiPlus);
  const DensityMatrix2Q rho = 0.9 * phi * phi.adjoint() + 0.1 * DensityMatrix2Q::Identity() / 4.0;
  const Compensation c = compensate_local_unitaries(rho, phi);
  REQUIRE(std::abs(c.phi1) < 1e-6);
  REQUIRE(std::abs(c.phi2) < 1e-6);
  REQUIRE_THAT(c.fidelity_after, WithinAbs(c.fidelity_before, 1e-12));
}

TEST_CASE("compensation strictly improves randomly rotated noisy states",
          "[tomography][property]") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  const Eigen::Vector4cd phi = bell_vector(Bell::PhiPlus);
  const DensityMatrix2Q base =
      run_gate(QubitPair::from_labels("D", "H"), {0.88, 0.945, 0.0})[0].conditional_state;
  for (int k = 0; k < 100; ++k) {
    const double a = angle(rng), b = angle(rng);
    if (std::abs(a) < 1e-3 && std::abs(b) < 1e-3) continue;
    const Compensation c = compensate_local_unitaries(apply_local_phases(base, a, b), phi);
    REQUIRE(c.fidelity_after > c.fidelity_before);
    REQUIRE_THAT(c.fidelity_after, WithinAbs(fidelity(base, phi), 1e-9));
  }
}
