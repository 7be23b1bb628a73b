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

#include "hcnot/counting.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "hcnot/errors.hpp"

namespace hcnot {

namespace {

bool valid_setting(const std::string& s) {
  if (s.size() != 2) return false;
  for (char c : s) {
    if (c != 'H' && c != 'D' && c != 'L') return false;
  }
  return true;
}

bool valid_outcome(const std::string& o) {
  return o == "00" || o == "01" || o == "10" || o == "11";
}

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

void CountRecord::validate() const {
  if (raw < 0 || blocked_ct < 0 || blocked_anc < 0) {
    throw ParameterError("count record " + setting + "/" + outcome + ": negative count");
  }
  if (!(integration_time > 0.0)) {
    throw ParameterError("count record " + setting + "/" + outcome +
                         ": integration_time must be positive");
  }
}

CountSampler::CountSampler(std::uint64_t seed, std::uint64_t stream)
    : engine_(seeded_engine(seed, stream)) {}

std::int64_t CountSampler::operator()(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw ParameterError("Poisson mean must be finite and non-negative");
  }
  if (mean == 0.0) return 0;
  std::poisson_distribution<std::int64_t> dist(mean);
  return dist(engine_);
}

std::int64_t sample_counts(double rate, double time, std::uint64_t seed) {
  if (!(rate >= 0.0)) throw ParameterError("sample_counts: rate must be non-negative");
  if (!(time >= 0.0)) throw ParameterError("sample_counts: time must be non-negative");
  CountSampler sampler(seed);
  return sampler(rate * time);
}

double noise_subtract(const CountRecord& r) {
  return static_cast<double>(r.raw) - static_cast<double>(r.blocked_ct) -
         static_cast<double>(r.blocked_anc);
}

bool subtraction_negative(const CountRecord& r) { return noise_subtract(r) < 0.0; }

double MonteCarloResult::rejection_fraction() const {
  const int total = accepted + rejected;
  return total == 0 ? 0.0 : static_cast<double>(rejected) / total;
}

MonteCarloResult monte_carlo(const std::vector<CountRecord>& records,
                             const Estimator& estimator, int n_samples,
                             std::uint64_t seed) {
  if (n_samples < 2) throw ParameterError("monte_carlo: n_samples must be at least 2");
  for (const auto& r : records) r.validate();

  MonteCarloResult result;
  result.plug_in = estimator(records);
  const Eigen::Index dim = result.plug_in.size();

  std::vector<Eigen::VectorXd> samples(static_cast<std::size_t>(n_samples));
  std::vector<bool> ok(samples.size(), false);
  std::vector<std::string> errors(samples.size());
  for (int k = 0; k < n_samples; ++k) {
    CountSampler draw(seed, static_cast<std::uint64_t>(k));
    std::vector<CountRecord> resampled = records;
    for (auto& r : resampled) {
      r.raw = draw(static_cast<double>(r.raw));
      r.blocked_ct = draw(static_cast<double>(r.blocked_ct));
      r.blocked_anc = draw(static_cast<double>(r.blocked_anc));
    }
    try {
      Eigen::VectorXd v = estimator(resampled);
      if (v.size() != dim) {
        throw EstimatorFailure("estimator changed output size");
      }
      if (!v.allFinite()) throw EstimatorFailure("estimator returned a non-finite value");
      samples[k] = std::move(v);
      ok[k] = true;
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  }

  // Fixed-order reduction over sample index.
  result.mean = Eigen::VectorXd::Zero(dim);
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (ok[k]) {
      result.mean += samples[k];
      ++result.accepted;
    } else {
      ++result.rejected;
      result.log.push_back("sample " + std::to_string(k) + " rejected: " + errors[k]);
    }
  }
  if (result.accepted < 2) {
    throw EstimatorFailure("monte_carlo: fewer than two samples accepted");
  }
  result.mean /= result.accepted;
  Eigen::VectorXd var = Eigen::VectorXd::Zero(dim);
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (ok[k]) var += (samples[k] - result.mean).array().square().matrix();
  }
  result.std = (var / (result.accepted - 1)).array().sqrt().matrix();
  return result;
}

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::int64_t parse_count(const std::string& field, const char* column, std::size_t line) {
  std::int64_t v = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw ParseError(line, std::string(column) + ": not an integer: '" + field + "'");
  }
  if (v < 0) throw ParseError(line, std::string(column) + ": negative count");
  return v;
}

}  // namespace

std::vector<CountRecord> read_count_table(std::istream& in, double integration_time) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<CountRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (trim(line).empty() || trim(line).front() == '#') continue;
    if (!header_seen) {
      if (trim(line) != kCountTableHeader) {
        throw ParseError(line_no, std::string("expected header '") + kCountTableHeader + "'");
      }
      header_seen = true;
      continue;
    }
    const auto f = split(line);
    if (f.size() != 6) {
      throw ParseError(line_no, "expected 6 fields, got " + std::to_string(f.size()));
    }
    CountRecord r;
    r.setting = f[0] + f[1];
    if (!valid_setting(r.setting)) {
      throw ParseError(line_no, "settings must be H, D or L");
    }
    r.outcome = f[2];
    if (!valid_outcome(r.outcome)) {
      throw ParseError(line_no, "outcome must be one of 00, 01, 10, 11");
    }
    r.raw = parse_count(f[3], "raw", line_no);
    r.blocked_ct = parse_count(f[4], "blocked_ct", line_no);
    r.blocked_anc = parse_count(f[5], "blocked_anc", line_no);
    r.integration_time = integration_time;
    records.push_back(std::move(r));
  }
  if (!header_seen) throw ParseError(line_no, "empty count table");
  return records;
}

void write_count_table(std::ostream& out, const std::vector<CountRecord>& records) {
  out << kCountTableHeader << '\n';
  for (const auto& r : records) {
    if (!valid_setting(r.setting) || !valid_outcome(r.outcome)) {
      throw ParameterError("write_count_table: record " + r.setting + "/" + r.outcome +
                           " is not a tomography cell");
    }
    out << r.setting[0] << ',' << r.setting[1] << ',' << r.outcome << ',' << r.raw << ','
        << r.blocked_ct << ',' << r.blocked_anc << '\n';
  }
}

}  // namespace hcnot
