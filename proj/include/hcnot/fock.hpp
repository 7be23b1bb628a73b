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
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hcnot {

using Complex = std::complex<double>;

/// Terms whose squared amplitude falls below this are dropped after
/// every evolution or projection.
inline constexpr double kAmplitudeCutoff = 1e-14;

/// The four waveguide modes of the gate: control, target and the two
/// ancilla modes.
enum class Spatial : std::uint8_t { c = 0, t = 1, a1 = 2, a2 = 3 };
enum class Pol : std::uint8_t { H = 0, V = 1 };

inline constexpr std::array<Spatial, 4> kAllSpatial = {
    Spatial::c, Spatial::t, Spatial::a1, Spatial::a2};

std::string to_string(Spatial s);
std::string to_string(Pol p);

/// One optical mode. `internal` labels an orthogonal temporal-spectral
/// wavepacket and is how partial distinguishability enters the model.
struct ModeLabel {
  Spatial spatial = Spatial::c;
  Pol pol = Pol::H;
  std::uint8_t internal = 0;

  auto operator<=>(const ModeLabel&) const = default;
};

std::string to_string(const ModeLabel& m);

/// Fixed total ordering of ModeLabels: spatial, then polarization, then
/// internal index. All matrices in the library are indexed this way.
class ModeSpace {
 public:
  explicit ModeSpace(int n_internal = 1);

  int n_internal() const { return n_internal_; }
  std::size_t size() const { return 8 * static_cast<std::size_t>(n_internal_); }

  std::size_t index(const ModeLabel& m) const;
  ModeLabel label(std::size_t index) const;

  /// All modes one threshold detector sees: a spatial+polarization output
  /// with every internal label.
  std::vector<std::size_t> detector_group(Spatial s, Pol p) const;
  std::vector<std::size_t> spatial_group(Spatial s) const;

  bool operator==(const ModeSpace&) const = default;

 private:
  int n_internal_;
};

/// Occupation-number basis state over a fixed number of modes.
class FockState {
 public:
  FockState() = default;
  explicit FockState(std::vector<std::uint8_t> occupations);

  static FockState vacuum(std::size_t num_modes);

  std::size_t num_modes() const { return occupations_.size(); }
  int total_photons() const { return total_; }
  int operator[](std::size_t mode) const { return occupations_[mode]; }
  std::span<const std::uint8_t> occupations() const { return occupations_; }

  FockState with_added(std::size_t mode) const;

  bool operator==(const FockState& o) const { return occupations_ == o.occupations_; }
  auto operator<=>(const FockState& o) const { return occupations_ <=> o.occupations_; }

 private:
  std::vector<std::uint8_t> occupations_;
  int total_ = 0;
};

std::string to_string(const FockState& f);

/// A single-photon mode function: amplitude per mode index. Applying it
/// as a creation operator adds one photon in that superposition.
using ModeFunction = std::vector<std::pair<std::size_t, Complex>>;

/// Superposition of Fock states with a common photon number. May be
/// sub-normalized when it represents a post-selected branch.
class PureState {
 public:
  using Terms = std::map<FockState, Complex>;

  explicit PureState(std::size_t num_modes) : num_modes_(num_modes) {}

  static PureState vacuum(std::size_t num_modes);
  static PureState basis(const FockState& f, Complex amplitude = 1.0);
  static PureState from_terms(std::size_t num_modes, const Terms& terms);

  std::size_t num_modes() const { return num_modes_; }
  /// Photon number shared by all terms, or -1 for the zero vector.
  int photon_number() const;
  bool empty() const { return terms_.empty(); }
  const Terms& terms() const { return terms_; }
  Complex amplitude(const FockState& f) const;

  double norm2() const;
  PureState normalized() const;
  PureState scaled(Complex factor) const;

  /// Applies the creation operator sum_j f_j a_j^dagger.
  PureState create(const ModeFunction& f) const;

  PureState operator+(const PureState& other) const;

 private:
  void accumulate(const FockState& f, Complex amplitude);
  void prune();

  std::size_t num_modes_;
  Terms terms_;
};

/// Unitary on mode space. Construction checks U^dagger U = I.
class ModeUnitary {
 public:
  explicit ModeUnitary(Eigen::MatrixXcd matrix, double tolerance = 1e-10);

  static ModeUnitary identity(std::size_t dimension);

  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  std::size_t dimension() const { return static_cast<std::size_t>(matrix_.rows()); }

  /// Composition: (a * b) applies b first, then a.
  ModeUnitary operator*(const ModeUnitary& rhs) const;
  ModeUnitary adjoint() const;

 private:
  Eigen::MatrixXcd matrix_;
};

/// Matrix permanent by Ryser's formula with Gray-code updates, O(2^n n).
Complex permanent(const Eigen::MatrixXcd& m);

/// Pushes a multi-photon state through a linear-optical unitary. The
/// transition amplitude between occupation patterns n and n' is
/// per(U[n', n]) / sqrt(prod n_i! prod n'_j!).
PureState evolve(const PureState& state, const ModeUnitary& u);

/// One detector pattern entry: the summed photon number over `modes` must
/// equal `count` exactly.
struct DetectorGroup {
  std::vector<std::size_t> modes;
  int count = 0;
};

struct Projection {
  double probability = 0.0;
  /// Renormalized conditional state; empty when probability is zero.
  PureState state{0};
};

Projection project_pattern(const PureState& state,
                           std::span<const DetectorGroup> pattern);

/// Unnormalized two-qubit polarization density matrix of the photons in
/// two spatial modes, tracing every other degree of freedom (internal
/// labels included). Basis order |HH>, |HV>, |VH>, |VV> with the first
/// mode as the left qubit. Trace equals the state's squared norm.
Eigen::Matrix4cd polarization_moment(const PureState& state,
                                     const ModeSpace& space, Spatial first,
                                     Spatial second);

/// As polarization_moment, normalized to unit trace.
Eigen::Matrix4cd reduce_to_qubits(const PureState& state,
                                  const ModeSpace& space, Spatial first,
                                  Spatial second);

/// Mode function for a single photon in `s` with polarization h|H> + v|V>
/// and internal wavepacket sum_k w_k |k>.
ModeFunction photon_mode(const ModeSpace& space, Spatial s, Complex h,
                         Complex v,
                         std::span<const Complex> internal = {});

}  // namespace hcnot
