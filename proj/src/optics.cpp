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

#include "hcnot/optics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "hcnot/errors.hpp"

namespace hcnot {

namespace {

constexpr Complex kI{0.0, 1.0};

Eigen::MatrixXcd identity_on(const ModeSpace& space) {
  const auto n = static_cast<Eigen::Index>(space.size());
  return Eigen::MatrixXcd::Identity(n, n);
}

void require_distinct(Spatial m1, Spatial m2, const char* what) {
  if (m1 == m2) {
    throw ContractViolation(std::string(what) + ": the two spatial modes must differ");
  }
}

}  // namespace

std::string to_string(Basis b) {
  switch (b) {
    case Basis::HV: return "H";
    case Basis::DA: return "D";
    case Basis::LR: return "L";
  }
  return "?";
}

Eigen::Matrix2cd jones_waveplate(WaveplateKind kind, double angle) {
  if (!std::isfinite(angle)) throw ParameterError("waveplate: angle must be finite");
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Eigen::Matrix2cd j;
  if (kind == WaveplateKind::HWP) {
    const double c2 = std::cos(2 * angle);
    const double s2 = std::sin(2 * angle);
    j << c2, s2, s2, -c2;
  } else {
    j << c * c + kI * s * s, (1.0 - kI) * s * c,
         (1.0 - kI) * s * c, s * s + kI * c * c;
  }
  return j;
}

Eigen::Matrix2cd jones_analyzer(Basis basis) {
  const double r = std::numbers::sqrt2 / 2;
  Eigen::Matrix2cd j;
  switch (basis) {
    case Basis::HV:
      j.setIdentity();
      break;
    case Basis::DA:
      j << r, r, r, -r;
      break;
    case Basis::LR:
      // rows are <L| and <R|
      j << r, -kI * r, r, kI * r;
      break;
  }
  return j;
}

ModeUnitary local_polarization(const ModeSpace& space, Spatial mode,
                               const Eigen::Matrix2cd& jones) {
  Eigen::MatrixXcd u = identity_on(space);
  for (int k = 0; k < space.n_internal(); ++k) {
    const auto kk = static_cast<std::uint8_t>(k);
    const std::array<Eigen::Index, 2> idx = {
        static_cast<Eigen::Index>(space.index({mode, Pol::H, kk})),
        static_cast<Eigen::Index>(space.index({mode, Pol::V, kk}))};
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) u(idx[r], idx[c]) = jones(r, c);
    }
  }
  return ModeUnitary(std::move(u));
}

ModeUnitary pbs_hv(const ModeSpace& space, Spatial m1, Spatial m2,
                   PbsConvention convention, double leakage) {
  require_distinct(m1, m2, "pbs_hv");
  if (!(leakage >= 0.0 && leakage <= 0.5)) {
    throw ParameterError("pbs_hv: leakage must lie in [0, 0.5]");
  }
  const Pol crossing = convention == PbsConvention::chip ? Pol::H : Pol::V;
  const double ok = std::sqrt(1.0 - leakage);
  const double bad = std::sqrt(leakage);
  Eigen::MatrixXcd u = identity_on(space);
  for (auto p : {Pol::H, Pol::V}) {
    const double stay = p == crossing ? bad : ok;
    const double cross = p == crossing ? ok : bad;
    for (int k = 0; k < space.n_internal(); ++k) {
      const auto kk = static_cast<std::uint8_t>(k);
      const auto i1 = static_cast<Eigen::Index>(space.index({m1, p, kk}));
      const auto i2 = static_cast<Eigen::Index>(space.index({m2, p, kk}));
      u(i1, i1) = stay;
      u(i2, i2) = stay;
      u(i1, i2) = kI * cross;
      u(i2, i1) = kI * cross;
    }
  }
  return ModeUnitary(std::move(u));
}

ModeUnitary waveplate(const ModeSpace& space, Spatial mode, WaveplateKind kind,
                      double angle) {
  return local_polarization(space, mode, jones_waveplate(kind, angle));
}

ModeUnitary phase_shift(const ModeSpace& space, Spatial mode, Pol pol,
                        double phase) {
  Eigen::Matrix2cd j = Eigen::Matrix2cd::Identity();
  const int i = static_cast<int>(pol);
  j(i, i) = std::polar(1.0, phase);
  return local_polarization(space, mode, j);
}

ModeUnitary rotated_pbs(const ModeSpace& space, Spatial m1, Spatial m2,
                        PbsConvention convention, double leakage) {
  require_distinct(m1, m2, "rotated_pbs");
  const double angle = std::numbers::pi / 8;
  const ModeUnitary w = waveplate(space, m1, WaveplateKind::HWP, angle) *
                        waveplate(space, m2, WaveplateKind::HWP, angle);
  return w * pbs_hv(space, m1, m2, convention, leakage) * w;
}

ModeUnitary bs5050(const ModeSpace& space, Spatial m1, Spatial m2) {
  require_distinct(m1, m2, "bs5050");
  const double r = std::numbers::sqrt2 / 2;
  Eigen::MatrixXcd u = identity_on(space);
  for (auto p : {Pol::H, Pol::V}) {
    for (int k = 0; k < space.n_internal(); ++k) {
      const auto kk = static_cast<std::uint8_t>(k);
      const auto i1 = static_cast<Eigen::Index>(space.index({m1, p, kk}));
      const auto i2 = static_cast<Eigen::Index>(space.index({m2, p, kk}));
      u(i1, i1) = r;
      u(i2, i2) = r;
      u(i1, i2) = kI * r;
      u(i2, i1) = kI * r;
    }
  }
  return ModeUnitary(std::move(u));
}

void Wiring::validate() const {
  std::array<int, 4> roles = {c, t, a1, a2};
  std::array<int, 4> sorted = roles;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != std::array<int, 4>{1, 2, 3, 4}) {
    throw ParameterError("wiring: roles must be a permutation of guides 1..4");
  }
  auto coupler = [](int guide) { return (guide - 1) / 2; };
  if (coupler(a1) != coupler(c) || coupler(a2) != coupler(t)) {
    throw ParameterError("wiring: (a1, c) and (a2, t) must each share a coupler");
  }
}

ModeUnitary build_cnot_circuit(const ModeSpace& space, PbsConvention convention,
                               double pbs_leakage) {
  const ModeUnitary pbs1 = pbs_hv(space, Spatial::a1, Spatial::c, convention, pbs_leakage);
  const ModeUnitary pbs2 =
      rotated_pbs(space, Spatial::a2, Spatial::t, convention, pbs_leakage);
  return pbs2 * pbs1;
}

}  // namespace hcnot
