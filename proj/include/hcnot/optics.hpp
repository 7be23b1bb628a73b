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

#pragma once

#include <Eigen/Dense>
#include <string>

#include "hcnot/fock.hpp"

namespace hcnot {

/// Which polarization a PBS routes across to the other waveguide. On the
/// chip H is transferred and V stays; a free-space cube transmits H and
/// reflects V, which in our labelling means V crosses.
enum class PbsConvention { chip, free_space };

enum class WaveplateKind { HWP, QWP };

/// Analyzer bases. Outcome 0 is H, D or L; outcome 1 is V, A or R, with
/// |L> = (|H> + i|V>)/sqrt2 and |R> = (|H> - i|V>)/sqrt2.
enum class Basis { HV, DA, LR };

std::string to_string(Basis b);

/// 2x2 Jones matrix of a waveplate with fast axis at `angle` radians.
/// HWP(t): H -> cos2t H + sin2t V, V -> sin2t H - cos2t V.
/// QWP(pi/4) maps |H> to |R> up to a global phase.
Eigen::Matrix2cd jones_waveplate(WaveplateKind kind, double angle);

/// Jones matrix taking the basis' outcome-0 state to |H> and outcome-1 to
/// |V>, i.e. the waveplate setting in front of an analyzer PBS.
Eigen::Matrix2cd jones_analyzer(Basis basis);

/// Lifts a 2x2 polarization matrix onto one spatial mode, identity on every
/// internal label and on all other modes.
ModeUnitary local_polarization(const ModeSpace& space, Spatial mode,
                               const Eigen::Matrix2cd& jones);

/// Polarizing beam splitter between two waveguides. The crossing
/// polarization picks up the reflection phase i. `leakage` is the power
/// fraction sent to the wrong port for either polarization (0 is ideal;
/// a 50:1 extinction is leakage 1/51).
ModeUnitary pbs_hv(const ModeSpace& space, Spatial m1, Spatial m2,
                   PbsConvention convention = PbsConvention::chip,
                   double leakage = 0.0);

ModeUnitary waveplate(const ModeSpace& space, Spatial mode, WaveplateKind kind,
                      double angle);

ModeUnitary phase_shift(const ModeSpace& space, Spatial mode, Pol pol,
                        double phase);

/// PBS acting in the D/A basis: HWP(22.5 deg) on both inputs, pbs_hv,
/// HWP(22.5 deg) on both outputs.
ModeUnitary rotated_pbs(const ModeSpace& space, Spatial m1, Spatial m2,
                        PbsConvention convention = PbsConvention::chip,
                        double leakage = 0.0);

/// Polarization-independent 50:50 splitter, [[1, i], [i, 1]] / sqrt2.
ModeUnitary bs5050(const ModeSpace& space, Spatial m1, Spatial m2);

/// Assignment of logical gate roles to the chip's physical waveguides
/// (numbered 1..4 as on the chip facet). The two couplers join
/// physical guides 1-2 and 3-4.
struct Wiring {
  int c = 2;
  int t = 3;
  int a1 = 1;
  int a2 = 4;

  /// Throws ParameterError unless the roles are a permutation of 1..4 that
  /// puts (a1, c) on one coupler and (a2, t) on the other.
  void validate() const;
};

/// The heralded CNOT interferometer: PBS1 (H/V) between a1 and c, then
/// PBS2 acting in the D/A basis between a2 and t.
ModeUnitary build_cnot_circuit(const ModeSpace& space,
                               PbsConvention convention = PbsConvention::chip,
                               double pbs_leakage = 0.0);

}  // namespace hcnot
