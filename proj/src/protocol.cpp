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

#include "hcnot/protocol.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "hcnot/errors.hpp"
#include "hcnot/optics.hpp"

namespace hcnot {

void QubitPair::validate() const {
  const double nc = std::norm(alpha) + std::norm(beta);
  const double nt = std::norm(gamma) + std::norm(delta);
  if (std::abs(nc - 1.0) > 1e-10 || std::abs(nt - 1.0) > 1e-10) {
    throw ParameterError("QubitPair: control and target must each be normalized");
  }
}

Eigen::Vector2cd QubitPair::polarization(const std::string& label) {
  const double r = std::numbers::sqrt2 / 2;
  const Complex i{0.0, 1.0};
  Eigen::Vector2cd v;
  if (label == "H") v << 1, 0;
  else if (label == "V") v << 0, 1;
  else if (label == "D") v << r, r;
  else if (label == "A") v << r, -r;
  else if (label == "L") v << r, i * r;
  else if (label == "R") v << r, -i * r;
  else throw ParameterError("unknown polarization label '" + label + "'");
  return v;
}

QubitPair QubitPair::from_labels(const std::string& control,
                                 const std::string& target) {
  const auto c = polarization(control);
  const auto t = polarization(target);
  return QubitPair{c[0], c[1], t[0], t[1]};
}

Eigen::Vector4cd QubitPair::vector() const {
  Eigen::Vector2cd c, t;
  c << alpha, beta;
  t << gamma, delta;
  return kron(c, t);
}

void NoiseConfig::validate() const {
  if (!(cross_overlap >= 0.0 && cross_overlap <= 1.0)) {
    throw ParameterError("cross_overlap must lie in [0, 1]");
  }
  if (!(ancilla_fidelity >= 0.25 && ancilla_fidelity <= 1.0)) {
    throw ParameterError("ancilla_fidelity must lie in [0.25, 1]");
  }
  if (!(pbs_leakage >= 0.0 && pbs_leakage <= 0.5)) {
    throw ParameterError("pbs_leakage must lie in [0, 0.5]");
  }
}

std::vector<std::pair<Bell, double>> werner_members(double fidelity) {
  if (!(fidelity >= 0.25 && fidelity <= 1.0)) {
    throw ParameterError("state fidelity must lie in [0.25, 1]");
  }
  std::vector<std::pair<Bell, double>> out = {{Bell::PsiMinus, fidelity}};
  const double rest = (1.0 - fidelity) / 3.0;
  if (rest > 0.0) {
    for (auto b : {Bell::PhiPlus, Bell::PhiMinus, Bell::PsiPlus}) out.emplace_back(b, rest);
  }
  return out;
}

std::array<Complex, 2> ancilla_wavepacket(double cross_overlap) {
  if (!(cross_overlap >= 0.0 && cross_overlap <= 1.0)) {
    throw ParameterError("cross_overlap must lie in [0, 1]");
  }
  return {std::sqrt(cross_overlap), std::sqrt(1.0 - cross_overlap)};
}

PureState apply_pair(const PureState& state, const ModeSpace& space,
                     const Eigen::Vector4cd& bell, Spatial s1, Spatial s2,
                     std::span<const Complex> internal) {
  PureState out(state.num_modes());
  for (int p = 0; p < 2; ++p) {
    for (int q = 0; q < 2; ++q) {
      const Complex b = bell[2 * p + q];
      if (b == Complex{}) continue;
      const auto f1 = photon_mode(space, s1, p == 0 ? 1.0 : 0.0, p == 1 ? 1.0 : 0.0, internal);
      const auto f2 = photon_mode(space, s2, q == 0 ? 1.0 : 0.0, q == 1 ? 1.0 : 0.0, internal);
      out = out + state.create(f2).create(f1).scaled(b);
    }
  }
  return out;
}

std::string to_string(Ancilla1Result r) { return r == Ancilla1Result::D ? "D" : "A"; }
std::string to_string(Ancilla2Result r) { return r == Ancilla2Result::H ? "H" : "V"; }

std::pair<Ancilla1Result, Ancilla2Result> herald_results(std::size_t index) {
  if (index >= kNumHeralds) throw DimensionError("herald index out of range");
  return {static_cast<Ancilla1Result>(index / 2),
          static_cast<Ancilla2Result>(index % 2)};
}

std::string herald_name(std::size_t index) {
  const auto [a1, a2] = herald_results(index);
  return to_string(a1) + to_string(a2);
}

Eigen::Matrix4cd FeedForwardRule::correction(std::size_t herald) const {
  if (herald >= kNumHeralds) throw DimensionError("herald index out of range");
  const auto [cp, tp] = corrections[herald];
  const Eigen::Matrix2cd c = cp == ControlPauli::Z ? pauli_z() : Eigen::Matrix2cd::Identity();
  const Eigen::Matrix2cd t = tp == TargetPauli::X ? pauli_x() : Eigen::Matrix2cd::Identity();
  return kron(c, t);
}

// Derived by derive_feedforward_rule() for the chip PBS convention.
const FeedForwardRule kFeedForwardRule{{{
    {ControlPauli::I, TargetPauli::I},  // DH
    {ControlPauli::I, TargetPauli::X},  // DV
    {ControlPauli::Z, TargetPauli::I},  // AH
    {ControlPauli::Z, TargetPauli::X},  // AV
}}};

ModeSpace gate_space() { return ModeSpace(2); }

ModeUnitary gate_unitary(double pbs_leakage) {
  const ModeSpace space = gate_space();
  return local_polarization(space, Spatial::a1, jones_analyzer(Basis::DA)) *
         build_cnot_circuit(space, PbsConvention::chip, pbs_leakage);
}

BranchMoments four_fold_moments(const PureState& input, double pbs_leakage) {
  const ModeSpace space = gate_space();
  const PureState out = evolve(input, gate_unitary(pbs_leakage));
  BranchMoments moments;
  for (std::size_t h = 0; h < kNumHeralds; ++h) {
    const auto [r1, r2] = herald_results(h);
    const std::array<DetectorGroup, 6> pattern = {{
        {space.detector_group(Spatial::a1, Pol::H), r1 == Ancilla1Result::D ? 1 : 0},
        {space.detector_group(Spatial::a1, Pol::V), r1 == Ancilla1Result::A ? 1 : 0},
        {space.detector_group(Spatial::a2, Pol::H), r2 == Ancilla2Result::H ? 1 : 0},
        {space.detector_group(Spatial::a2, Pol::V), r2 == Ancilla2Result::V ? 1 : 0},
        {space.spatial_group(Spatial::c), 1},
        {space.spatial_group(Spatial::t), 1},
    }};
    const Projection p = project_pattern(out, pattern);
    moments[h] = p.probability > 0.0
                     ? DensityMatrix2Q(p.probability *
                                       polarization_moment(p.state, space, Spatial::c, Spatial::t))
                     : DensityMatrix2Q(DensityMatrix2Q::Zero());
  }
  return moments;
}

PureState one_pair_each_input(const QubitPair& input, Bell ancilla,
                              double cross_overlap) {
  input.validate();
  const ModeSpace space = gate_space();
  const auto wp = ancilla_wavepacket(cross_overlap);
  PureState s = PureState::vacuum(space.size());
  s = s.create(photon_mode(space, Spatial::c, input.alpha, input.beta));
  s = s.create(photon_mode(space, Spatial::t, input.gamma, input.delta));
  return apply_pair(s, space, bell_vector(ancilla), Spatial::a1, Spatial::a2, wp);
}

namespace {

BranchMoments noisy_moments(const QubitPair& input, const NoiseConfig& noise) {
  noise.validate();
  BranchMoments total;
  total.fill(DensityMatrix2Q::Zero());
  for (const auto& [bell, w] : werner_members(noise.ancilla_fidelity)) {
    const auto m = four_fold_moments(one_pair_each_input(input, bell, noise.cross_overlap),
                                     noise.pbs_leakage);
    for (std::size_t h = 0; h < kNumHeralds; ++h) total[h] += w * m[h];
  }
  return total;
}

}  // namespace

std::array<HeraldOutcome, kNumHeralds> run_gate(const QubitPair& input,
                                               const NoiseConfig& noise) {
  const BranchMoments m = noisy_moments(input, noise);
  std::array<HeraldOutcome, kNumHeralds> out;
  for (std::size_t h = 0; h < kNumHeralds; ++h) {
    const auto [r1, r2] = herald_results(h);
    out[h].ancilla1 = r1;
    out[h].ancilla2 = r2;
    out[h].probability = m[h].trace().real();
    if (out[h].probability > 0.0) {
      out[h].conditional_state = m[h] / out[h].probability;
    }
  }
  return out;
}

DensityMatrix2Q apply_feedforward(const HeraldOutcome& outcome,
                                  const FeedForwardRule& rule) {
  const auto h = 2 * static_cast<std::size_t>(outcome.ancilla1) +
                 static_cast<std::size_t>(outcome.ancilla2);
  const Eigen::Matrix4cd c = rule.correction(h);
  return c * outcome.conditional_state * c.adjoint();
}

double herald_probability(const QubitPair& input, const NoiseConfig& noise) {
  double p = 0.0;
  for (const auto& o : run_gate(input, noise)) p += o.probability;
  return p;
}

Eigen::Vector4cd cnot_output(const QubitPair& input) {
  const Eigen::Vector4cd v = input.vector();
  Eigen::Vector4cd out;
  out << v[0], v[1], v[3], v[2];
  return out;
}

FeedForwardRule derive_feedforward_rule() {
  const std::array<std::pair<const char*, const char*>, 7> probes = {{
      {"H", "H"}, {"H", "V"}, {"V", "H"}, {"V", "V"}, {"D", "H"}, {"L", "D"}, {"A", "L"}}};
  std::array<std::array<HeraldOutcome, kNumHeralds>, probes.size()> runs;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    runs[i] = run_gate(QubitPair::from_labels(probes[i].first, probes[i].second), NoiseConfig{});
  }

  FeedForwardRule rule;
  for (std::size_t h = 0; h < kNumHeralds; ++h) {
    double best = -1.0;
    for (auto cp : {ControlPauli::I, ControlPauli::Z}) {
      for (auto tp : {TargetPauli::I, TargetPauli::X}) {
        FeedForwardRule trial;
        trial.corrections.fill({cp, tp});
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < probes.size(); ++i) {
          const auto in = QubitPair::from_labels(probes[i].first, probes[i].second);
          worst = std::min(worst, fidelity(apply_feedforward(runs[i][h], trial), cnot_output(in)));
        }
        if (worst > best) {
          best = worst;
          rule.corrections[h] = {cp, tp};
        }
      }
    }
    if (best < 1.0 - 1e-9) {
      throw ContractViolation("derive_feedforward_rule: herald " + herald_name(h) +
                              " is not a Pauli-corrected CNOT");
    }
  }
  return rule;
}

TruthTable ideal_truth_table() {
  TruthTable t = TruthTable::Zero();
  t(0, 0) = t(1, 1) = t(2, 3) = t(3, 2) = 1.0;
  return t;
}

Eigen::Vector4d corrected_populations(
    const std::array<Eigen::Vector4d, kNumHeralds>& per_herald,
    const FeedForwardRule& rule) {
  Eigen::Vector4d out = Eigen::Vector4d::Zero();
  for (std::size_t h = 0; h < kNumHeralds; ++h) {
    const bool flip = rule.corrections[h].second == TargetPauli::X;
    for (int k = 0; k < 4; ++k) out[flip ? (k ^ 1) : k] += per_herald[h][k];
  }
  return out;
}

TruthTable truth_table(const NoiseConfig& noise) {
  static constexpr std::array<const char*, 4> kC = {"H", "H", "V", "V"};
  static constexpr std::array<const char*, 4> kT = {"H", "V", "H", "V"};
  TruthTable table = TruthTable::Zero();
  for (int row = 0; row < 4; ++row) {
    const auto m = noisy_moments(QubitPair::from_labels(kC[row], kT[row]), noise);
    std::array<Eigen::Vector4d, kNumHeralds> pops;
    for (std::size_t h = 0; h < kNumHeralds; ++h) pops[h] = m[h].diagonal().real();
    const Eigen::Vector4d r = corrected_populations(pops);
    const double total = r.sum();
    if (total <= 0.0) throw ContractViolation("truth_table: input never heralded");
    table.row(row) = (r / total).transpose();
  }
  return table;
}

double truth_table_overlap(const TruthTable& measured, const TruthTable& ideal) {
  double s = 0.0;
  for (int row = 0; row < 4; ++row) s += measured.row(row).dot(ideal.row(row));
  return s / 4.0;
}

}  // namespace hcnot
