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

namespace hcnot {

/// Two-qubit density matrix in the basis |HH>, |HV>, |VH>, |VV>.
using DensityMatrix2Q = Eigen::Matrix4cd;

enum class Bell { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

inline constexpr std::array<Bell, 4> kAllBell = {
    Bell::PhiPlus, Bell::PhiMinus, Bell::PsiPlus, Bell::PsiMinus};

std::string to_string(Bell b);
Eigen::Vector4cd bell_vector(Bell b);

Eigen::Matrix2cd pauli_x();
Eigen::Matrix2cd pauli_y();
Eigen::Matrix2cd pauli_z();

Eigen::Matrix4cd kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b);
Eigen::Vector4cd kron(const Eigen::Vector2cd& a, const Eigen::Vector2cd& b);

/// <psi|rho|psi>, clamped to [0, 1].
double fidelity(const DensityMatrix2Q& rho, const Eigen::Vector4cd& target);
double trace_distance(const DensityMatrix2Q& a, const DensityMatrix2Q& b);
double purity(const DensityMatrix2Q& rho);

/// Hermitian, trace one and no eigenvalue below -tolerance.
bool is_physical(const DensityMatrix2Q& rho, double tolerance = 1e-9);

/// Bell state with the largest overlap; ties go to the first in kAllBell.
Bell closest_bell(const DensityMatrix2Q& rho);

}  // namespace hcnot
