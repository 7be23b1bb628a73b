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

// Independent reference implementations used only by the tests.

#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace hcnot::testing {

using Cx = std::complex<double>;
using Occupation = std::vector<int>;
using Expansion = std::map<Occupation, Cx>;

/// Applies a creation operator sum_j f_j b_j^dagger to every term,
/// including the sqrt(n + 1) factor.
inline Expansion create(const Expansion& in, const Eigen::VectorXcd& f) {
  Expansion out;
  for (const auto& [occ, amp] : in) {
    for (Eigen::Index j = 0; j < f.size(); ++j) {
      if (f(j) == Cx(0.0)) continue;
      Occupation o = occ;
      const double bose = std::sqrt(static_cast<double>(o[j] + 1));
      ++o[j];
      out[o] += amp * f(j) * bose;
    }
  }
  return out;
}

/// Brute-force output of |n> under a_i^dagger -> sum_j U(j, i) b_j^dagger,
/// by expanding the product of transformed creation operators.
inline Expansion brute_force_evolve(const Occupation& n, const Eigen::MatrixXcd& u) {
  Expansion state{{Occupation(n.size(), 0), Cx(1.0)}};
  double norm = 1.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    for (int k = 0; k < n[i]; ++k) {
      state = create(state, u.col(static_cast<Eigen::Index>(i)));
      norm *= (k + 1);
    }
  }
  for (auto& [occ, amp] : state) amp /= std::sqrt(norm);
  return state;
}

/// Permanent by summing over all permutations.
inline Cx naive_permanent(const Eigen::MatrixXcd& m) {
  const int n = static_cast<int>(m.rows());
  std::vector<int> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
  Cx sum = 0.0;
  do {
    Cx term = 1.0;
    for (int i = 0; i < n; ++i) term *= m(i, p[static_cast<std::size_t>(i)]);
    sum += term;
  } while (std::next_permutation(p.begin(), p.end()));
  return sum;
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix.
inline Eigen::MatrixXcd random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd z(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) z(i, j) = Cx(g(rng), g(rng));
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR();
  for (int i = 0; i < n; ++i) q.col(i) *= r(i, i) / std::abs(r(i, i));
  return q;
}

/// Random density matrix of the given rank.
inline Eigen::Matrix4cd random_density(int rank, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd a(4, rank);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < rank; ++j) a(i, j) = Cx(g(rng), g(rng));
  }
  Eigen::Matrix4cd rho = a * a.adjoint();
  return rho / rho.trace().real();
}

}  // namespace hcnot::testing
