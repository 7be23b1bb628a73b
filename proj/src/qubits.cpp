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

#include "hcnot/qubits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hcnot {

std::string to_string(Bell b) {
  switch (b) {
    case Bell::PhiPlus: return "Phi+";
    case Bell::PhiMinus: return "Phi-";
    case Bell::PsiPlus: return "Psi+";
    case Bell::PsiMinus: return "Psi-";
  }
  return "?";
}

Eigen::Vector4cd bell_vector(Bell b) {
  const double r = std::numbers::sqrt2 / 2;
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  switch (b) {
    case Bell::PhiPlus: v << r, 0, 0, r; break;
    case Bell::PhiMinus: v << r, 0, 0, -r; break;
    case Bell::PsiPlus: v << 0, r, r, 0; break;
    case Bell::PsiMinus: v << 0, r, -r, 0; break;
  }
  return v;
}

Eigen::Matrix2cd pauli_x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}

Eigen::Matrix2cd pauli_y() {
  Eigen::Matrix2cd m;
  m << 0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0;
  return m;
}

Eigen::Matrix2cd pauli_z() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}

Eigen::Matrix4cd kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  }
  return out;
}

Eigen::Vector4cd kron(const Eigen::Vector2cd& a, const Eigen::Vector2cd& b) {
  Eigen::Vector4cd out;
  out << a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1];
  return out;
}

double fidelity(const DensityMatrix2Q& rho, const Eigen::Vector4cd& target) {
  const double f = (target.adjoint() * rho * target)(0, 0).real();
  return std::clamp(f, 0.0, 1.0);
}

double trace_distance(const DensityMatrix2Q& a, const DensityMatrix2Q& b) {
  const Eigen::Matrix4cd d = a - b;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(0.5 * (d + d.adjoint()),
                                                     Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double purity(const DensityMatrix2Q& rho) { return (rho * rho).trace().real(); }

bool is_physical(const DensityMatrix2Q& rho, double tolerance) {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tolerance) return false;
  if (std::abs(rho.trace() - 1.0) > tolerance) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tolerance;
}

Bell closest_bell(const DensityMatrix2Q& rho) {
  Bell best = kAllBell[0];
  double best_f = -1.0;
  for (auto b : kAllBell) {
    const double f = fidelity(rho, bell_vector(b));
    if (f > best_f + 1e-12) {
      best_f = f;
      best = b;
    }
  }
  return best;
}

}  // namespace hcnot
