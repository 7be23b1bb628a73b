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

#include <string>
#include <vector>

#include "hcnot/fock.hpp"
#include "hcnot/protocol.hpp"

namespace hcnot {

/// One SPDC pair source. `pair_probability` is the per-pulse probability
/// of one pair reaching the chip; `state_fidelity` is the fidelity of a
/// pair with |Psi->.
struct SourceConfig {
  double pair_probability = 0.01;
  double state_fidelity = 1.0;
  /// Internal label of this source's distinguishable wavepacket component.
  int internal_index = 0;

  void validate() const;
};

/// Cross-source squared wavepacket overlap x. Photons from the same
/// source are always mutually ideal.
struct DistinguishabilityModel {
  double cross_overlap = 1.0;

  void validate() const;
};

/// The three leading-order four-photon emission classes.
enum class EmissionClass { CT_double, ANC_double, one_each };

std::string to_string(EmissionClass c);

struct EnsembleMember {
  /// Fraction of the class weight carried by this pure state.
  double fraction = 1.0;
  PureState state{0};
};

struct EmissionEvent {
  EmissionClass cls = EmissionClass::one_each;
  /// Per-pulse probability of this class, leading order in p.
  double weight = 0.0;
  std::vector<EnsembleMember> members;
};

/// Pure states of a Bell-pair source emitting exactly `pairs` (1 or 2)
/// pairs into (s1, s2), as the matching term of the exp(tau K) expansion
/// with K the pair creation operator. Mixed sources are expanded pair by
/// pair over werner_members(). Fractions sum to one; `relative_weight`
/// receives the emission probability in units of p^pairs.
std::vector<EnsembleMember> pair_source_ensemble(
    const SourceConfig& source, int pairs, Spatial s1, Spatial s2,
    std::span<const Complex> internal, double* relative_weight = nullptr);

/// Builds the three classes for a given control-target input. CT pairs
/// are projected onto the input product state by polarizers, so a CT
/// double pair is two identical photons in each of c and t.
std::vector<EmissionEvent> emission_ensemble(const SourceConfig& ct,
                                             const SourceConfig& anc,
                                             const DistinguishabilityModel& d,
                                             const QubitPair& input);

struct ClassRates {
  EmissionClass cls = EmissionClass::one_each;
  /// Per-pulse, per-herald unnormalized control-target moments: the trace
  /// is the class' four-fold probability for that herald outcome.
  BranchMoments moments;
};

std::vector<ClassRates> four_fold_rates(const std::vector<EmissionEvent>& events,
                                        double pbs_leakage = 0.0);

/// What an experiment records: everything on, and each source blocked.
struct BlockedRates {
  BranchMoments raw;
  BranchMoments blocked_ct;   // only the ancilla source emits
  BranchMoments blocked_anc;  // only the control-target source emits
};

BlockedRates combine_rates(const std::vector<ClassRates>& classes);

/// Cross-source HOM visibility (C_max - C_min) / C_max for one photon from
/// each source, both projected onto H, meeting at a 50:50 splitter.
double hom_visibility(const DistinguishabilityModel& d);

struct HomPoint {
  /// Temporal overlap factor g in [0, 1]; g = 0 is a delay far outside the
  /// coherence time, g = 1 is zero delay.
  double temporal_overlap = 0.0;
  double coincidence_raw = 0.0;
  double coincidence_subtracted = 0.0;
};

struct HomScan {
  std::vector<HomPoint> points;
  double visibility_raw = 0.0;
  double visibility_subtracted = 0.0;
};

/// Two-fold coincidence scan behind the splitter, with double-pair
/// emissions from either source as background (two photons in one input
/// port). Rates are per pulse.
HomScan hom_scan(const SourceConfig& ct, const SourceConfig& anc,
                 const DistinguishabilityModel& d, int n_points = 21);

}  // namespace hcnot
