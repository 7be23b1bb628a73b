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
#include <array>
#include <string>
#include <utility>
#include <vector>

#include "hcnot/fock.hpp"
#include "hcnot/qubits.hpp"

namespace hcnot {

/// Product input (alpha|H> + beta|V>)_c (x) (gamma|H> + delta|V>)_t.
struct QubitPair {
  Complex alpha = 1.0;
  Complex beta = 0.0;
  Complex gamma = 1.0;
  Complex delta = 0.0;

  /// Throws ParameterError unless each qubit is normalized within 1e-10.
  void validate() const;

  /// Named single-qubit states: H, V, D, A, L, R.
  static QubitPair from_labels(const std::string& control,
                               const std::string& target);
  static Eigen::Vector2cd polarization(const std::string& label);

  Eigen::Vector4cd vector() const;
};

/// Imperfections acting inside one four-photon run.
struct NoiseConfig {
  /// Squared wavepacket overlap between photons from different sources.
  double cross_overlap = 1.0;
  /// Fidelity of the ancilla pair with |Psi->; the remainder is white noise.
  double ancilla_fidelity = 1.0;
  /// Wrong-port power fraction of both on-chip PBSs. Off by default.
  double pbs_leakage = 0.0;

  void validate() const;
};

/// Bell-state ensemble equivalent to F|Psi-><Psi-| + (1-p) I/4 with state
/// fidelity F: Psi- with weight F, each other Bell state (1-F)/3.
std::vector<std::pair<Bell, double>> werner_members(double fidelity);

/// Internal wavepacket of a photon from the ancilla source:
/// sqrt(x)|0> + sqrt(1-x)|1>. Control-target photons sit in |0>.
std::array<Complex, 2> ancilla_wavepacket(double cross_overlap);

/// Applies sum_{p,q} b_pq a^dagger_{s1,p} a^dagger_{s2,q} to `state`, the
/// pair creation operator of a polarization Bell state b.
PureState apply_pair(const PureState& state, const ModeSpace& space,
                     const Eigen::Vector4cd& bell, Spatial s1, Spatial s2,
                     std::span<const Complex> internal = {});

enum class Ancilla1Result { D = 0, A = 1 };
enum class Ancilla2Result { H = 0, V = 1 };

std::string to_string(Ancilla1Result r);
std::string to_string(Ancilla2Result r);

/// Herald outcomes are indexed 2 * a1 + a2: DH, DV, AH, AV.
inline constexpr std::size_t kNumHeralds = 4;
std::pair<Ancilla1Result, Ancilla2Result> herald_results(std::size_t index);
std::string herald_name(std::size_t index);

struct HeraldOutcome {
  Ancilla1Result ancilla1 = Ancilla1Result::D;
  Ancilla2Result ancilla2 = Ancilla2Result::H;
  double probability = 0.0;
  /// Control-target state before feed-forward; zero if probability is 0.
  DensityMatrix2Q conditional_state = DensityMatrix2Q::Zero();
};

enum class ControlPauli { I, Z };
enum class TargetPauli { I, X };

/// Pauli correction applied to (control, target) for each herald outcome.
struct FeedForwardRule {
  std::array<std::pair<ControlPauli, TargetPauli>, kNumHeralds> corrections;

  Eigen::Matrix4cd correction(std::size_t herald) const;
  bool operator==(const FeedForwardRule&) const = default;
};

/// Frozen rule for the default (chip) PBS convention. A regression test
/// re-derives it from ideal runs.
extern const FeedForwardRule kFeedForwardRule;

/// Finds, for every herald outcome, the Pauli pair that maps the ideal
/// conditional state onto the CNOT output for a set of probe inputs.
FeedForwardRule derive_feedforward_rule();

/// Mode space used by the gate simulation: two internal labels, enough
/// for one distinguishable wavepacket component.
ModeSpace gate_space();

/// The interferometer followed by the a1 analyzer rotation (D/A -> H/V),
/// so that herald outcomes are read in the H/V detector groups.
ModeUnitary gate_unitary(double pbs_leakage = 0.0);

/// Unnormalized control-target density matrices for the four herald
/// outcomes, conditioned on one photon in each output waveguide
/// (a four-fold coincidence). Each trace is that outcome's probability.
using BranchMoments = std::array<DensityMatrix2Q, kNumHeralds>;
BranchMoments four_fold_moments(const PureState& input,
                                double pbs_leakage = 0.0);

/// Four-photon input: control and target photons plus one ancilla pair.
PureState one_pair_each_input(const QubitPair& input, Bell ancilla,
                              double cross_overlap);

std::array<HeraldOutcome, kNumHeralds> run_gate(const QubitPair& input,
                                               const NoiseConfig& noise);

DensityMatrix2Q apply_feedforward(
    const HeraldOutcome& outcome,
    const FeedForwardRule& rule = kFeedForwardRule);

double herald_probability(const QubitPair& input, const NoiseConfig& noise);

/// Rows are the inputs HH, HV, VH, VV; columns the outputs in that order.
using TruthTable = Eigen::Matrix4d;

TruthTable ideal_truth_table();

/// Herald-conditioned, feed-forward-corrected computational-basis table.
TruthTable truth_table(const NoiseConfig& noise);

/// Folds the feed-forward rule into computational-basis counts:
/// per_herald[h](out) is the population of output `out` in branch h.
Eigen::Vector4d corrected_populations(
    const std::array<Eigen::Vector4d, kNumHeralds>& per_herald,
    const FeedForwardRule& rule = kFeedForwardRule);

/// Mean over the four inputs of the probability assigned to the ideal
/// output. Each row of `measured` should be normalized.
double truth_table_overlap(const TruthTable& measured,
                           const TruthTable& ideal = ideal_truth_table());

/// The ideal CNOT output vector for an input.
Eigen::Vector4cd cnot_output(const QubitPair& input);

}  // namespace hcnot
