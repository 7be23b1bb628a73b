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

#include <array>
#include <span>
#include <string>
#include <vector>

#include "hcnot/counting.hpp"
#include "hcnot/optics.hpp"
#include "hcnot/qubits.hpp"

namespace hcnot {

struct MeasurementSetting {
  Basis q1 = Basis::HV;
  Basis q2 = Basis::HV;

  /// Two-letter label such as "HD".
  std::string label() const;
  auto operator<=>(const MeasurementSetting&) const = default;
};

inline constexpr std::size_t kNumSettings = 9;
inline constexpr std::size_t kNumCells = 36;

/// The nine settings, control basis outermost, each in H, D, L order.
std::array<MeasurementSetting, kNumSettings> all_settings();

/// Rank-one projectors for outcomes 00, 01, 10, 11; bit 0 is the first
/// state of a basis (H, D or L).
std::array<DensityMatrix2Q, 4> projectors(const MeasurementSetting& s);

/// Counts ordered as all_settings() x outcome.
using CountTable = std::array<double, kNumCells>;

/// Builds a count table from records by noise subtraction. Missing cells
/// are an error; repeated cells add up.
CountTable count_table_from_records(const std::vector<CountRecord>& records);

/// Exact mean counts for `rho` with `per_setting` events in each setting.
CountTable expected_counts(const DensityMatrix2Q& rho, double per_setting);

struct MleOptions {
  double tolerance = 1e-10;
  int max_iterations = 100000;
  double dilution = 0.5;
};

struct MleResult {
  DensityMatrix2Q rho;
  bool converged = false;
  int iterations = 0;
  /// Mean per-setting log-likelihood sum f log p of the returned state.
  double log_likelihood = 0.0;
  std::vector<double> history;
  std::vector<std::string> warnings;
};

/// Maximum-likelihood state with outcome frequencies normalized per
/// setting. Negative counts are treated as zero (with a warning); an all
/// zero table throws EstimatorFailure.
MleResult mle_reconstruct(std::span<const double, kNumCells> counts,
                          const MleOptions& options = {});

/// diag(1, e^{i phi1}) (x) diag(1, e^{i phi2}) applied by conjugation.
DensityMatrix2Q apply_local_phases(const DensityMatrix2Q& rho, double phi1, double phi2);

struct Compensation {
  DensityMatrix2Q rho;
  double phi1 = 0.0;
  double phi2 = 0.0;
  double fidelity_before = 0.0;
  double fidelity_after = 0.0;
};

/// Local phase pair maximizing fidelity with `target`. The identity is
/// always a candidate.
Compensation compensate_local_unitaries(const DensityMatrix2Q& rho,
                                        const Eigen::Vector4cd& target);

}  // namespace hcnot
