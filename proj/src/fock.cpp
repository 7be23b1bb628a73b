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

#include "hcnot/fock.hpp"

#include <bit>
#include <cmath>
#include <set>

#include "hcnot/errors.hpp"

namespace hcnot {

std::string to_string(Spatial s) {
  switch (s) {
    case Spatial::c: return "c";
    case Spatial::t: return "t";
    case Spatial::a1: return "a1";
    case Spatial::a2: return "a2";
  }
  return "?";
}

std::string to_string(Pol p) { return p == Pol::H ? "H" : "V"; }

std::string to_string(const ModeLabel& m) {
  return to_string(m.spatial) + ":" + to_string(m.pol) + ":" +
         std::to_string(m.internal);
}

ModeSpace::ModeSpace(int n_internal) : n_internal_(n_internal) {
  if (n_internal < 1 || n_internal > 255) {
    throw ParameterError("ModeSpace: internal label count must be in [1, 255]");
  }
}

std::size_t ModeSpace::index(const ModeLabel& m) const {
  if (m.internal >= n_internal_) {
    throw DimensionError("ModeSpace: internal label " +
                         std::to_string(m.internal) + " out of range");
  }
  return (static_cast<std::size_t>(m.spatial) * 2 +
          static_cast<std::size_t>(m.pol)) *
             n_internal_ +
         m.internal;
}

ModeLabel ModeSpace::label(std::size_t index) const {
  if (index >= size()) throw DimensionError("ModeSpace: mode index out of range");
  const auto n = static_cast<std::size_t>(n_internal_);
  const auto sp = index / n;
  return ModeLabel{static_cast<Spatial>(sp / 2), static_cast<Pol>(sp % 2),
                   static_cast<std::uint8_t>(index % n)};
}

std::vector<std::size_t> ModeSpace::detector_group(Spatial s, Pol p) const {
  std::vector<std::size_t> out;
  for (int k = 0; k < n_internal_; ++k) {
    out.push_back(index({s, p, static_cast<std::uint8_t>(k)}));
  }
  return out;
}

std::vector<std::size_t> ModeSpace::spatial_group(Spatial s) const {
  auto out = detector_group(s, Pol::H);
  auto v = detector_group(s, Pol::V);
  out.insert(out.end(), v.begin(), v.end());
  return out;
}

FockState::FockState(std::vector<std::uint8_t> occupations)
    : occupations_(std::move(occupations)) {
  for (auto n : occupations_) total_ += n;
}

FockState FockState::vacuum(std::size_t num_modes) {
  return FockState(std::vector<std::uint8_t>(num_modes, 0));
}

FockState FockState::with_added(std::size_t mode) const {
  if (mode >= occupations_.size()) {
    throw DimensionError("FockState: mode index out of range");
  }
  auto occ = occupations_;
  ++occ[mode];
  return FockState(std::move(occ));
}

std::string to_string(const FockState& f) {
  std::string out = "|";
  for (std::size_t i = 0; i < f.num_modes(); ++i) {
    if (i) out += ",";
    out += std::to_string(f[i]);
  }
  return out + ">";
}

PureState PureState::vacuum(std::size_t num_modes) {
  return basis(FockState::vacuum(num_modes));
}

PureState PureState::basis(const FockState& f, Complex amplitude) {
  PureState s(f.num_modes());
  s.accumulate(f, amplitude);
  s.prune();
  return s;
}

PureState PureState::from_terms(std::size_t num_modes, const Terms& terms) {
  PureState s(num_modes);
  int photons = -1;
  for (const auto& [f, a] : terms) {
    if (f.num_modes() != num_modes) {
      throw DimensionError("PureState: Fock state has wrong mode count");
    }
    if (photons >= 0 && f.total_photons() != photons) {
      throw ContractViolation("PureState: terms differ in photon number");
    }
    photons = f.total_photons();
    s.accumulate(f, a);
  }
  s.prune();
  return s;
}

int PureState::photon_number() const {
  return terms_.empty() ? -1 : terms_.begin()->first.total_photons();
}

Complex PureState::amplitude(const FockState& f) const {
  auto it = terms_.find(f);
  return it == terms_.end() ? Complex{} : it->second;
}

double PureState::norm2() const {
  double n = 0.0;
  for (const auto& [f, a] : terms_) n += std::norm(a);
  return n;
}

PureState PureState::normalized() const {
  const double n = norm2();
  if (n <= 0.0) throw ContractViolation("PureState: cannot normalize zero vector");
  return scaled(1.0 / std::sqrt(n));
}

PureState PureState::scaled(Complex factor) const {
  PureState s(num_modes_);
  for (const auto& [f, a] : terms_) s.terms_.emplace(f, a * factor);
  s.prune();
  return s;
}

PureState PureState::create(const ModeFunction& f) const {
  PureState out(num_modes_);
  for (const auto& [fs, a] : terms_) {
    for (const auto& [mode, c] : f) {
      if (mode >= num_modes_) throw DimensionError("create: mode index out of range");
      out.accumulate(fs.with_added(mode), a * c * std::sqrt(fs[mode] + 1.0));
    }
  }
  out.prune();
  return out;
}

PureState PureState::operator+(const PureState& other) const {
  if (other.num_modes_ != num_modes_) {
    throw DimensionError("PureState: adding states over different mode counts");
  }
  if (!empty() && !other.empty() && photon_number() != other.photon_number()) {
    throw ContractViolation("PureState: adding states of different photon number");
  }
  PureState out = *this;
  for (const auto& [f, a] : other.terms_) out.accumulate(f, a);
  out.prune();
  return out;
}

void PureState::accumulate(const FockState& f, Complex amplitude) {
  terms_[f] += amplitude;
}

void PureState::prune() {
  std::erase_if(terms_, [](const auto& kv) {
    return std::norm(kv.second) < kAmplitudeCutoff;
  });
}

ModeUnitary::ModeUnitary(Eigen::MatrixXcd matrix, double tolerance)
    : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) {
    throw DimensionError("ModeUnitary: matrix is not square");
  }
  const Eigen::MatrixXcd check =
      matrix_.adjoint() * matrix_ -
      Eigen::MatrixXcd::Identity(matrix_.rows(), matrix_.cols());
  if (check.cwiseAbs().maxCoeff() > tolerance) {
    throw ContractViolation("ModeUnitary: matrix is not unitary");
  }
}

ModeUnitary ModeUnitary::identity(std::size_t dimension) {
  const auto n = static_cast<Eigen::Index>(dimension);
  return ModeUnitary(Eigen::MatrixXcd::Identity(n, n));
}

ModeUnitary ModeUnitary::operator*(const ModeUnitary& rhs) const {
  if (rhs.dimension() != dimension()) {
    throw DimensionError("ModeUnitary: composing unitaries of different size");
  }
  return ModeUnitary(matrix_ * rhs.matrix_);
}

ModeUnitary ModeUnitary::adjoint() const { return ModeUnitary(matrix_.adjoint()); }

Complex permanent(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw DimensionError("permanent: matrix is not square");
  const auto n = static_cast<int>(m.rows());
  if (n == 0) return 1.0;
  if (n > 30) throw DimensionError("permanent: dimension too large");
  if (n == 1) return m(0, 0);

  Eigen::VectorXcd row_sums = Eigen::VectorXcd::Zero(n);
  Complex total = 0.0;
  std::uint64_t gray = 0;
  const std::uint64_t subsets = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < subsets; ++k) {
    const int col = std::countr_zero(k);
    gray ^= std::uint64_t{1} << col;
    if (gray & (std::uint64_t{1} << col)) {
      row_sums += m.col(col);
    } else {
      row_sums -= m.col(col);
    }
    Complex prod = 1.0;
    for (int i = 0; i < n; ++i) prod *= row_sums[i];
    total += (std::popcount(gray) % 2 == 0) ? prod : -prod;
  }
  return (n % 2 == 0) ? total : -total;
}

namespace {

double factorial_product(std::span<const std::uint8_t> occ) {
  static constexpr std::array<double, 13> kFact = {
      1, 1, 2, 6, 24, 120, 720, 5040, 40320, 362880, 3628800, 39916800,
      479001600};
  double p = 1.0;
  for (auto n : occ) {
    p *= n < kFact.size() ? kFact[n] : std::tgamma(n + 1.0);
  }
  return p;
}

// Calls fn(occupations) for every way of placing `photons` bosons into
// the listed modes.
template <typename Fn>
void for_each_pattern(const std::vector<std::size_t>& modes, int photons,
                      std::vector<std::uint8_t>& occ, std::size_t pos,
                      Fn&& fn) {
  if (pos + 1 == modes.size()) {
    occ[modes[pos]] = static_cast<std::uint8_t>(photons);
    fn(occ);
    occ[modes[pos]] = 0;
    return;
  }
  for (int k = photons; k >= 0; --k) {
    occ[modes[pos]] = static_cast<std::uint8_t>(k);
    for_each_pattern(modes, photons - k, occ, pos + 1, fn);
  }
  occ[modes[pos]] = 0;
}

}  // namespace

PureState evolve(const PureState& state, const ModeUnitary& u) {
  if (state.num_modes() != u.dimension()) {
    throw DimensionError("evolve: state has " +
                         std::to_string(state.num_modes()) +
                         " modes, unitary acts on " +
                         std::to_string(u.dimension()));
  }
  const auto& U = u.matrix();
  const std::size_t m = state.num_modes();
  PureState::Terms out;

  for (const auto& [in, amp] : state.terms()) {
    const int n = in.total_photons();
    if (n == 0) {
      out[in] += amp;
      continue;
    }
    std::vector<Eigen::Index> cols;
    std::vector<bool> reachable(m, false);
    for (std::size_t i = 0; i < m; ++i) {
      for (int k = 0; k < in[i]; ++k) cols.push_back(static_cast<Eigen::Index>(i));
      if (in[i] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) {
        if (std::norm(U(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i))) > 0.0) {
          reachable[j] = true;
        }
      }
    }
    std::vector<std::size_t> targets;
    for (std::size_t j = 0; j < m; ++j) {
      if (reachable[j]) targets.push_back(j);
    }
    const double in_norm = std::sqrt(factorial_product(in.occupations()));

    Eigen::MatrixXcd sub(n, n);
    std::vector<std::uint8_t> occ(m, 0);
    for_each_pattern(targets, n, occ, 0, [&](const std::vector<std::uint8_t>& o) {
      Eigen::Index r = 0;
      for (std::size_t j = 0; j < m; ++j) {
        for (int k = 0; k < o[j]; ++k, ++r) {
          for (Eigen::Index c = 0; c < n; ++c) {
            sub(r, c) = U(static_cast<Eigen::Index>(j), cols[static_cast<std::size_t>(c)]);
          }
        }
      }
      const Complex a = permanent(sub);
      if (a == Complex{}) return;
      out[FockState(o)] += amp * a / (in_norm * std::sqrt(factorial_product(o)));
    });
  }
  return PureState::from_terms(state.num_modes(), out);
}

Projection project_pattern(const PureState& state,
                           std::span<const DetectorGroup> pattern) {
  std::set<std::size_t> seen;
  for (const auto& g : pattern) {
    for (auto mode : g.modes) {
      if (mode >= state.num_modes()) {
        throw DimensionError("project_pattern: mode index out of range");
      }
      if (!seen.insert(mode).second) {
        throw ContractViolation("project_pattern: detector groups overlap");
      }
    }
  }

  PureState::Terms kept;
  double p = 0.0;
  for (const auto& [f, a] : state.terms()) {
    bool match = true;
    for (const auto& g : pattern) {
      int n = 0;
      for (auto mode : g.modes) n += f[mode];
      if (n != g.count) {
        match = false;
        break;
      }
    }
    if (match) {
      kept.emplace(f, a);
      p += std::norm(a);
    }
  }
  Projection result;
  result.probability = p;
  result.state = PureState::from_terms(state.num_modes(), kept);
  if (p > 0.0) result.state = result.state.scaled(1.0 / std::sqrt(p));
  return result;
}

namespace {

struct LocatedPhoton {
  Pol pol;
  std::uint8_t internal;
};

LocatedPhoton locate_single(const FockState& f, const ModeSpace& space,
                            Spatial s) {
  int found = 0;
  LocatedPhoton where{Pol::H, 0};
  for (auto mode : space.spatial_group(s)) {
    if (f[mode] == 0) continue;
    found += f[mode];
    const auto label = space.label(mode);
    where = {label.pol, label.internal};
  }
  if (found != 1) {
    throw ContractViolation("reduce_to_qubits: spatial mode " + to_string(s) +
                            " holds " + std::to_string(found) +
                            " photons, expected exactly 1");
  }
  return where;
}

}  // namespace

Eigen::Matrix4cd polarization_moment(const PureState& state,
                                     const ModeSpace& space, Spatial first,
                                     Spatial second) {
  if (state.num_modes() != space.size()) {
    throw DimensionError("reduce_to_qubits: state does not live on this mode space");
  }
  if (first == second) {
    throw ContractViolation("reduce_to_qubits: the two spatial modes must differ");
  }
  const auto g1 = space.spatial_group(first);
  const auto g2 = space.spatial_group(second);

  std::map<std::vector<std::uint8_t>, Eigen::Vector4cd> branches;
  for (const auto& [f, a] : state.terms()) {
    const auto p1 = locate_single(f, space, first);
    const auto p2 = locate_single(f, space, second);
    std::vector<std::uint8_t> env(f.occupations().begin(), f.occupations().end());
    for (auto mode : g1) env[mode] = 0;
    for (auto mode : g2) env[mode] = 0;
    env.push_back(p1.internal);
    env.push_back(p2.internal);
    auto [it, inserted] = branches.try_emplace(std::move(env), Eigen::Vector4cd::Zero());
    it->second[2 * static_cast<int>(p1.pol) + static_cast<int>(p2.pol)] += a;
  }
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  for (const auto& [env, v] : branches) rho += v * v.adjoint();
  return rho;
}

Eigen::Matrix4cd reduce_to_qubits(const PureState& state,
                                  const ModeSpace& space, Spatial first,
                                  Spatial second) {
  Eigen::Matrix4cd rho = polarization_moment(state, space, first, second);
  const double tr = rho.trace().real();
  if (tr <= 0.0) throw ContractViolation("reduce_to_qubits: zero state");
  return rho / tr;
}

ModeFunction photon_mode(const ModeSpace& space, Spatial s, Complex h,
                         Complex v, std::span<const Complex> internal) {
  static const std::array<Complex, 1> kPure = {Complex{1.0}};
  if (internal.empty()) internal = kPure;
  if (internal.size() > static_cast<std::size_t>(space.n_internal())) {
    throw DimensionError("photon_mode: more internal amplitudes than labels");
  }
  ModeFunction f;
  for (std::size_t k = 0; k < internal.size(); ++k) {
    const auto kk = static_cast<std::uint8_t>(k);
    if (h != Complex{}) f.emplace_back(space.index({s, Pol::H, kk}), h * internal[k]);
    if (v != Complex{}) f.emplace_back(space.index({s, Pol::V, kk}), v * internal[k]);
  }
  return f;
}

}  // namespace hcnot
