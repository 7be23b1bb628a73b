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

#include "hcnot/source.hpp"

#include <array>
#include <cmath>

#include "hcnot/errors.hpp"
#include "hcnot/optics.hpp"

namespace hcnot {

void SourceConfig::validate() const {
  if (!(pair_probability >= 0.0 && pair_probability <= 0.1)) {
    throw ParameterError("pair_probability must lie in [0, 0.1]");
  }
  if (!(state_fidelity >= 0.25 && state_fidelity <= 1.0)) {
    throw ParameterError("state_fidelity must lie in [0.25, 1]");
  }
  if (internal_index < 0 || internal_index >= gate_space().n_internal()) {
    throw ParameterError("internal_index out of range");
  }
}

void DistinguishabilityModel::validate() const {
  if (!(cross_overlap >= 0.0 && cross_overlap <= 1.0)) {
    throw ParameterError("cross_overlap must lie in [0, 1]");
  }
}

std::string to_string(EmissionClass c) {
  switch (c) {
    case EmissionClass::CT_double: return "CT_double";
    case EmissionClass::ANC_double: return "ANC_double";
    case EmissionClass::one_each: return "one_each";
  }
  return "?";
}

namespace {

using Wavepacket = std::array<Complex, 2>;

Wavepacket pure_wavepacket(int index) {
  Wavepacket w{};
  w[static_cast<std::size_t>(index)] = 1.0;
  return w;
}

// sqrt(x) on the reference label, sqrt(1 - x) on the source's own label.
Wavepacket mixed_wavepacket(int reference, int own, double overlap) {
  Wavepacket w{};
  w[static_cast<std::size_t>(reference)] += std::sqrt(overlap);
  w[static_cast<std::size_t>(own)] += std::sqrt(1.0 - overlap);
  return w;
}

double project_count(const PureState& s, const std::vector<std::size_t>& modes,
                     int count) {
  const std::array<DetectorGroup, 1> g = {{{modes, count}}};
  return project_pattern(s, g).probability;
}

}  // namespace

std::vector<EnsembleMember> pair_source_ensemble(
    const SourceConfig& source, int pairs, Spatial s1, Spatial s2,
    std::span<const Complex> internal, double* relative_weight) {
  source.validate();
  const ModeSpace space = gate_space();
  const PureState vac = PureState::vacuum(space.size());
  const auto mix = werner_members(source.state_fidelity);
  std::vector<EnsembleMember> out;

  if (pairs == 1) {
    for (const auto& [b, w] : mix) {
      out.push_back({w, apply_pair(vac, space, bell_vector(b), s1, s2, internal)});
    }
    if (relative_weight) *relative_weight = 1.0;
    return out;
  }
  if (pairs != 2) throw ParameterError("pair_source_ensemble: pairs must be 1 or 2");

  // Second-order term tau^2 K_b1 K_b2 / 2 with K = sqrt2 * (pair operator);
  // with p = 2|tau|^2 its probability is p^2 / 4 * |P_b1 P_b2 |0>|^2.
  double total = 0.0;
  for (const auto& [b1, w1] : mix) {
    for (const auto& [b2, w2] : mix) {
      const PureState s = apply_pair(apply_pair(vac, space, bell_vector(b2), s1, s2, internal),
                                     space, bell_vector(b1), s1, s2, internal);
      const double weight = w1 * w2 * s.norm2() / 4.0;
      total += weight;
      out.push_back({weight, s.normalized()});
    }
  }
  for (auto& m : out) m.fraction /= total;
  if (relative_weight) *relative_weight = total;
  return out;
}

std::vector<EmissionEvent> emission_ensemble(const SourceConfig& ct,
                                             const SourceConfig& anc,
                                             const DistinguishabilityModel& d,
                                             const QubitPair& input) {
  ct.validate();
  anc.validate();
  d.validate();
  input.validate();
  if (ct.internal_index == anc.internal_index) {
    throw ParameterError("the two sources need distinct internal labels");
  }
  const ModeSpace space = gate_space();
  const Wavepacket ct_wp = pure_wavepacket(ct.internal_index);
  const Wavepacket anc_wp =
      mixed_wavepacket(ct.internal_index, anc.internal_index, d.cross_overlap);
  const auto c_mode = photon_mode(space, Spatial::c, input.alpha, input.beta, ct_wp);
  const auto t_mode = photon_mode(space, Spatial::t, input.gamma, input.delta, ct_wp);
  const PureState vac = PureState::vacuum(space.size());

  std::vector<EmissionEvent> events;

  EmissionEvent ct_double{EmissionClass::CT_double,
                          ct.pair_probability * ct.pair_probability, {}};
  ct_double.members.push_back(
      {1.0, vac.create(c_mode).create(c_mode).create(t_mode).create(t_mode).normalized()});
  events.push_back(std::move(ct_double));

  double rel = 0.0;
  EmissionEvent anc_double{EmissionClass::ANC_double, 0.0,
                           pair_source_ensemble(anc, 2, Spatial::a1, Spatial::a2, anc_wp, &rel)};
  anc_double.weight = rel * anc.pair_probability * anc.pair_probability;
  events.push_back(std::move(anc_double));

  EmissionEvent one_each{EmissionClass::one_each,
                         ct.pair_probability * anc.pair_probability, {}};
  const PureState ct_pair = vac.create(c_mode).create(t_mode);
  for (const auto& [b, w] : werner_members(anc.state_fidelity)) {
    one_each.members.push_back(
        {w, apply_pair(ct_pair, space, bell_vector(b), Spatial::a1, Spatial::a2, anc_wp)});
  }
  events.push_back(std::move(one_each));
  return events;
}

std::vector<ClassRates> four_fold_rates(const std::vector<EmissionEvent>& events,
                                        double pbs_leakage) {
  std::vector<ClassRates> out;
  for (const auto& e : events) {
    ClassRates r;
    r.cls = e.cls;
    r.moments.fill(DensityMatrix2Q::Zero());
    if (e.weight > 0.0) {
      for (const auto& m : e.members) {
        const auto mm = four_fold_moments(m.state, pbs_leakage);
        for (std::size_t h = 0; h < kNumHeralds; ++h) {
          r.moments[h] += e.weight * m.fraction * mm[h];
        }
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

BlockedRates combine_rates(const std::vector<ClassRates>& classes) {
  BlockedRates b;
  b.raw.fill(DensityMatrix2Q::Zero());
  b.blocked_ct.fill(DensityMatrix2Q::Zero());
  b.blocked_anc.fill(DensityMatrix2Q::Zero());
  for (const auto& c : classes) {
    for (std::size_t h = 0; h < kNumHeralds; ++h) {
      b.raw[h] += c.moments[h];
      if (c.cls == EmissionClass::ANC_double) b.blocked_ct[h] += c.moments[h];
      if (c.cls == EmissionClass::CT_double) b.blocked_anc[h] += c.moments[h];
    }
  }
  return b;
}

namespace {

// Coincidence probability behind a 50:50 splitter for a photon in c with
// wavepacket `first` and one in t (or in c when `same_port`) with `second`.
double splitter_coincidence(const Wavepacket& first, const Wavepacket& second,
                            bool same_port) {
  const ModeSpace space = gate_space();
  PureState s = PureState::vacuum(space.size());
  s = s.create(photon_mode(space, Spatial::c, 1.0, 0.0, first));
  s = s.create(photon_mode(space, same_port ? Spatial::c : Spatial::t, 1.0, 0.0, second));
  const PureState out = evolve(s, bs5050(space, Spatial::c, Spatial::t));
  const std::array<DetectorGroup, 2> pattern = {{
      {space.spatial_group(Spatial::c), 1},
      {space.spatial_group(Spatial::t), 1},
  }};
  return project_pattern(out, pattern).probability / s.norm2();
}

}  // namespace

double hom_visibility(const DistinguishabilityModel& d) {
  d.validate();
  const double c_max = splitter_coincidence(pure_wavepacket(0), pure_wavepacket(1), false);
  const double c_min =
      splitter_coincidence(pure_wavepacket(0), mixed_wavepacket(0, 1, d.cross_overlap), false);
  return (c_max - c_min) / c_max;
}

HomScan hom_scan(const SourceConfig& ct, const SourceConfig& anc,
                 const DistinguishabilityModel& d, int n_points) {
  ct.validate();
  anc.validate();
  d.validate();
  if (n_points < 2) throw ParameterError("hom_scan: need at least two points");
  const ModeSpace space = gate_space();
  const Wavepacket wp = pure_wavepacket(0);

  // Photons bound for the splitter leave each source through a1 and are
  // projected onto H; the partners (a2) are not detected.
  auto h_probability = [&](const SourceConfig& src, int pairs, double* rel) {
    double p = 0.0;
    for (const auto& m : pair_source_ensemble(src, pairs, Spatial::a1, Spatial::a2, wp, rel)) {
      p += m.fraction * project_count(m.state, space.detector_group(Spatial::a1, Pol::H), pairs);
    }
    return p;
  };
  double rel_ct = 0.0, rel_anc = 0.0, unused = 0.0;
  const double signal_weight = ct.pair_probability * anc.pair_probability *
                               h_probability(ct, 1, &unused) * h_probability(anc, 1, &unused);
  const double ct_hh = h_probability(ct, 2, &rel_ct);
  const double anc_hh = h_probability(anc, 2, &rel_anc);
  const double noise_weight =
      rel_ct * ct.pair_probability * ct.pair_probability * ct_hh +
      rel_anc * anc.pair_probability * anc.pair_probability * anc_hh;
  const double bunched = splitter_coincidence(wp, wp, true);

  HomScan scan;
  for (int k = 0; k < n_points; ++k) {
    const double g = static_cast<double>(k) / (n_points - 1);
    const double overlap = std::min(1.0, d.cross_overlap * g);
    const double signal =
        signal_weight * splitter_coincidence(pure_wavepacket(0), mixed_wavepacket(0, 1, overlap), false);
    scan.points.push_back({g, signal + noise_weight * bunched, signal});
  }
  const auto& far = scan.points.front();
  const auto& zero = scan.points.back();
  if (far.coincidence_raw > 0.0) {
    scan.visibility_raw = (far.coincidence_raw - zero.coincidence_raw) / far.coincidence_raw;
  }
  if (far.coincidence_subtracted > 0.0) {
    scan.visibility_subtracted =
        (far.coincidence_subtracted - zero.coincidence_subtracted) / far.coincidence_subtracted;
  }
  return scan;
}

}  // namespace hcnot
