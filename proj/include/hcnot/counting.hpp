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

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hcnot {

/// Counts for one (setting, outcome) cell, together with the two
/// source-blocked background measurements taken over the same time.
struct CountRecord {
  /// Analyzer setting, e.g. "HD" (control H/V, target D/A).
  std::string setting;
  /// Outcome bits, "00" .. "11".
  std::string outcome;
  std::int64_t raw = 0;
  std::int64_t blocked_ct = 0;
  std::int64_t blocked_anc = 0;
  double integration_time = 1.0;

  void validate() const;
};

/// Poisson variate with mean rate * time.
std::int64_t sample_counts(double rate, double time, std::uint64_t seed);

/// Seedable Poisson sampler producing one independent stream per
/// (seed, stream) pair.
class CountSampler {
 public:
  CountSampler(std::uint64_t seed, std::uint64_t stream = 0);
  std::int64_t operator()(double mean);

 private:
  std::mt19937_64 engine_;
};

/// raw - blocked_ct - blocked_anc. Negative values are returned as is.
double noise_subtract(const CountRecord& r);

/// True when subtraction went below zero.
bool subtraction_negative(const CountRecord& r);

using Estimator = std::function<Eigen::VectorXd(const std::vector<CountRecord>&)>;

struct MonteCarloResult {
  Eigen::VectorXd plug_in;  // estimator on the observed counts
  Eigen::VectorXd mean;
  Eigen::VectorXd std;      // sample standard deviation (n - 1)
  int accepted = 0;
  int rejected = 0;
  std::vector<std::string> log;

  double rejection_fraction() const;
};

/// Resamples every count as Poisson around its observed value and applies
/// `estimator` per sample. A sample whose estimator throws is rejected and
/// logged. Sample k draws from its own stream of `seed`, so results do not
/// depend on evaluation order.
MonteCarloResult monte_carlo(const std::vector<CountRecord>& records,
                             const Estimator& estimator, int n_samples = 1000,
                             std::uint64_t seed = 0);

/// Count-table CSV:
///   setting_q1,setting_q2,outcome,raw,blocked_ct,blocked_anc
/// Settings are H, D or L; outcomes 00, 01, 10, 11. Blank lines and lines
/// starting with '#' are skipped.
inline constexpr const char* kCountTableHeader =
    "setting_q1,setting_q2,outcome,raw,blocked_ct,blocked_anc";

std::vector<CountRecord> read_count_table(std::istream& in,
                                          double integration_time = 1.0);
void write_count_table(std::ostream& out, const std::vector<CountRecord>& records);

}  // namespace hcnot
