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

#include "hcnot/tomography.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "hcnot/errors.hpp"

namespace hcnot {

std::string MeasurementSetting::label() const { return to_string(q1) + to_string(q2); }

std::array<MeasurementSetting, kNumSettings> all_settings() {
  constexpr std::array<Basis, 3> bases = {Basis::HV, Basis::DA, Basis::LR};
  std::array<MeasurementSetting, kNumSettings> out;
  std::size_t k = 0;
  for (Basis a : bases) {
    for (Basis b : bases) out[k++] = {a, b};
  }
  return out;
}

std::array<DensityMatrix2Q, 4> projectors(const MeasurementSetting& s) {
  const Eigen::Matrix2cd a1 = jones_analyzer(s.q1);
  const Eigen::Matrix2cd a2 = jones_analyzer(s.q2);
  std::array<DensityMatrix2Q, 4> out;
  for (int b1 = 0; b1 < 2; ++b1) {
    for (int b2 = 0; b2 < 2; ++b2) {
      const Eigen::Vector2cd k1 = a1.row(b1).adjoint();
      const Eigen::Vector2cd k2 = a2.row(b2).adjoint();
      const Eigen::Vector4cd v = kron(k1, k2);
      out[static_cast<std::size_t>(b1 * 2 + b2)] = v * v.adjoint();
    }
  }
  return out;
}

namespace {

std::array<std::array<DensityMatrix2Q, 4>, kNumSettings> all_projectors() {
  std::array<std::array<DensityMatrix2Q, 4>, kNumSettings> out;
  const auto settings = all_settings();
  for (std::size_t s = 0; s < kNumSettings; ++s) out[s] = projectors(settings[s]);
  return out;
}

const std::array<std::array<DensityMatrix2Q, 4>, kNumSettings>& cached_projectors() {
  static const auto p = all_projectors();
  return p;
}

}  // namespace

CountTable count_table_from_records(const std::vector<CountRecord>& records) {
  const auto settings = all_settings();
  std::map<std::string, std::size_t> index;
  for (std::size_t s = 0; s < kNumSettings; ++s) {
    for (int o = 0; o < 4; ++o) {
      const std::string outcome{static_cast<char>('0' + o / 2), static_cast<char>('0' + o % 2)};
      index[settings[s].label() + "/" + outcome] = s * 4 + static_cast<std::size_t>(o);
    }
  }
  CountTable table{};
  std::array<bool, kNumCells> seen{};
  for (const auto& r : records) {
    const auto it = index.find(r.setting + "/" + r.outcome);
    if (it == index.end()) {
      throw ParameterError("unknown tomography cell " + r.setting + "/" + r.outcome);
    }
    table[it->second] += noise_subtract(r);
    seen[it->second] = true;
  }
  for (std::size_t k = 0; k < kNumCells; ++k) {
    if (!seen[k]) {
      throw ParameterError("count table is missing cell " + settings[k / 4].label() + "/" +
                           std::to_string(k % 4 / 2) + std::to_string(k % 2));
    }
  }
  return table;
}

CountTable expected_counts(const DensityMatrix2Q& rho, double per_setting) {
  const auto& proj = cached_projectors();
  CountTable out{};
  for (std::size_t s = 0; s < kNumSettings; ++s) {
    for (std::size_t o = 0; o < 4; ++o) {
      out[s * 4 + o] = per_setting * std::max(0.0, (proj[s][o] * rho).trace().real());
    }
  }
  return out;
}

namespace {

constexpr double kMinProbability = 1e-300;

struct Frequencies {
  std::array<double, kNumCells> f{};
  int active_settings = 0;
};

double log_likelihood(const Frequencies& fr, const DensityMatrix2Q& rho) {
  const auto& proj = cached_projectors();
  double sum = 0.0;
  for (std::size_t k = 0; k < kNumCells; ++k) {
    if (fr.f[k] <= 0.0) continue;
    const double p = (proj[k / 4][k % 4] * rho).trace().real();
    sum += fr.f[k] * std::log(std::max(p, kMinProbability));
  }
  return sum / fr.active_settings;
}

DensityMatrix2Q r_operator(const Frequencies& fr, const DensityMatrix2Q& rho) {
  const auto& proj = cached_projectors();
  DensityMatrix2Q r = DensityMatrix2Q::Zero();
  for (std::size_t k = 0; k < kNumCells; ++k) {
    if (fr.f[k] <= 0.0) continue;
    const auto& pk = proj[k / 4][k % 4];
    const double p = (pk * rho).trace().real();
    r += (fr.f[k] / std::max(p, kMinProbability)) * pk;
  }
  return r / fr.active_settings;
}

DensityMatrix2Q conjugate_normalized(const DensityMatrix2Q& m, const DensityMatrix2Q& rho) {
  DensityMatrix2Q out = m * rho * m.adjoint();
  out = 0.5 * (out + out.adjoint()).eval();
  return out / out.trace().real();
}

}  // namespace

MleResult mle_reconstruct(std::span<const double, kNumCells> counts,
                          const MleOptions& options) {
  if (!(options.tolerance > 0.0) || options.max_iterations < 1 ||
      !(options.dilution > 0.0)) {
    throw ParameterError("mle_reconstruct: invalid options");
  }
  MleResult result;
  Frequencies fr;
  bool clamped = false;
  for (std::size_t s = 0; s < kNumSettings; ++s) {
    double total = 0.0;
    for (std::size_t o = 0; o < 4; ++o) {
      double n = counts[s * 4 + o];
      if (!std::isfinite(n)) throw EstimatorFailure("mle_reconstruct: non-finite count");
      if (n < 0.0) {
        clamped = true;
        n = 0.0;
      }
      fr.f[s * 4 + o] = n;
      total += n;
    }
    if (total > 0.0) {
      for (std::size_t o = 0; o < 4; ++o) fr.f[s * 4 + o] /= total;
      ++fr.active_settings;
    } else {
      result.warnings.push_back("setting " + all_settings()[s].label() +
                                " has no counts and is ignored");
    }
  }
  if (clamped) result.warnings.push_back("negative counts treated as zero");
  if (fr.active_settings == 0) throw EstimatorFailure("mle_reconstruct: all counts are zero");

  const DensityMatrix2Q identity = DensityMatrix2Q::Identity();
  DensityMatrix2Q rho = identity / 4.0;
  double ll = log_likelihood(fr, rho);
  result.history.push_back(ll);

  for (int it = 1; it <= options.max_iterations; ++it) {
    const DensityMatrix2Q r = r_operator(fr, rho);
    DensityMatrix2Q next = conjugate_normalized(r, rho);
    double next_ll = log_likelihood(fr, next);
    // Plain RrR can overshoot; fall back to diluted steps, which increase
    // the likelihood for small enough dilution.
    for (double eps = options.dilution; next_ll < ll && eps > 1e-14; eps *= 0.5) {
      next = conjugate_normalized((identity + eps * r) / (1.0 + eps), rho);
      next_ll = log_likelihood(fr, next);
    }
    result.iterations = it;
    if (next_ll < ll) {
      result.converged = true;
      break;
    }
    const double gain = next_ll - ll;
    rho = next;
    ll = next_ll;
    result.history.push_back(ll);
    if (gain < options.tolerance) {
      result.converged = true;
      break;
    }
  }
  if (!result.converged) {
    result.warnings.push_back("iteration limit reached before convergence");
  }
  result.rho = rho;
  result.log_likelihood = ll;
  return result;
}

DensityMatrix2Q apply_local_phases(const DensityMatrix2Q& rho, double phi1, double phi2) {
  const Complex i(0.0, 1.0);
  Eigen::Vector4cd d;
  d << 1.0, std::exp(i * phi2), std::exp(i * phi1), std::exp(i * (phi1 + phi2));
  return d.asDiagonal() * rho * d.conjugate().asDiagonal();
}

namespace {

double wrap_phase(double phi) {
  phi = std::remainder(phi, 2.0 * std::numbers::pi);
  return phi;
}

}  // namespace

Compensation compensate_local_unitaries(const DensityMatrix2Q& rho,
                                        const Eigen::Vector4cd& target) {
  const Eigen::Vector4cd psi = target.normalized();
  auto score = [&](double a, double b) { return fidelity(apply_local_phases(rho, a, b), psi); };

  Compensation out;
  out.fidelity_before = score(0.0, 0.0);
  double best_a = 0.0, best_b = 0.0, best = out.fidelity_before;

  constexpr int kGrid = 36;
  const double step = 2.0 * std::numbers::pi / kGrid;
  for (int i = 0; i < kGrid; ++i) {
    for (int j = 0; j < kGrid; ++j) {
      const double f = score(i * step, j * step);
      if (f > best) {
        best = f;
        best_a = i * step;
        best_b = j * step;
      }
    }
  }
  // Compass search around the best grid point.
  for (double h = step; h > 1e-10;) {
    bool moved = false;
    for (const auto& [da, db] : {std::pair{h, 0.0}, {-h, 0.0}, {0.0, h}, {0.0, -h}}) {
      const double f = score(best_a + da, best_b + db);
      if (f > best) {
        best = f;
        best_a += da;
        best_b += db;
        moved = true;
        break;
      }
    }
    if (!moved) h *= 0.5;
  }
  out.phi1 = wrap_phase(best_a);
  out.phi2 = wrap_phase(best_b);
  out.rho = apply_local_phases(rho, out.phi1, out.phi2);
  out.fidelity_after = std::max(best, out.fidelity_before);
  if (best <= out.fidelity_before) {
    out.phi1 = out.phi2 = 0.0;
    out.rho = rho;
  }
  return out;
}

}  // namespace hcnot
