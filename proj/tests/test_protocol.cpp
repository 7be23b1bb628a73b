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

#include <catch_amalgamated.hpp>

#include <random>

#include "hcnot/errors.hpp"
#include "hcnot/protocol.hpp"

using namespace hcnot;
using Catch::Matchers::WithinAbs;

namespace {

QubitPair random_input(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::Vector2cd a(Complex(g(rng), g(rng)), Complex(g(rng), g(rng)));
  Eigen::Vector2cd b(Complex(g(rng), g(rng)), Complex(g(rng), g(rng)));
  a.normalize();
  b.normalize();
  return {a(0), a(1), b(0), b(1)};
}

}  // namespace

TEST_CASE("heralding succeeds with probability one quarter", "[protocol]") {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 10; ++k) {
    REQUIRE_THAT(herald_probability(random_input(rng), NoiseConfig{}), WithinAbs(0.25, 1e-9));
  }
}

TEST_CASE("each herald outcome occurs with probability 1/16", "[protocol]") {
  const auto out = run_gate(QubitPair::from_labels("H", "D"), NoiseConfig{});
  for (const auto& o : out) REQUIRE_THAT(o.probability, WithinAbs(1.0 / 16.0, 1e-12));
}

TEST_CASE("the |D,H> input produces the four Bell states", "[protocol]") {
  const auto out = run_gate(QubitPair::from_labels("D", "H"), NoiseConfig{});
  const std::array<Bell, 4> expected = {Bell::PhiPlus, Bell::PsiPlus, Bell::PhiMinus,
                                        Bell::PsiMinus};
  for (std::size_t h = 0; h < kNumHeralds; ++h) {
    REQUIRE_THAT(fidelity(out[h].conditional_state, bell_vector(expected[h])),
                 WithinAbs(1.0, 1e-9));
    REQUIRE_THAT(fidelity(apply_feedforward(out[h]), bell_vector(Bell::PhiPlus)),
                 WithinAbs(1.0, 1e-9));
  }
}

TEST_CASE("the frozen feed-forward rule matches a fresh derivation", "[protocol]") {
  REQUIRE(derive_feedforward_rule() == kFeedForwardRule);
}

TEST_CASE("corrected output is the CNOT image of random inputs", "[protocol][property]") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 20; ++k) {
    const QubitPair in = random_input(rng);
    const Eigen::Vector4cd want = cnot_output(in);
    for (const auto& o : run_gate(in, NoiseConfig{})) {
      REQUIRE_THAT(fidelity(apply_feedforward(o), want), WithinAbs(1.0, 1e-9));
    }
  }
}

TEST_CASE("ideal truth table is the CNOT permutation", "[protocol]") {
  const TruthTable t = truth_table(NoiseConfig{});
  REQUIRE((t - ideal_truth_table()).norm() < 1e-9);
  REQUIRE_THAT(truth_table_overlap(t), WithinAbs(1.0, 1e-12));
}

TEST_CASE("fully distinguishable ancillas halve the logic contrast", "[protocol]") {
  REQUIRE_THAT(truth_table_overlap(truth_table({0.0, 1.0, 0.0})), WithinAbs(0.5, 1e-9));
  REQUIRE_THAT(truth_table_overlap(truth_table({0.5, 1.0, 0.0})), WithinAbs(0.75, 1e-9));
}

TEST_CASE("truth-table overlap degrades monotonically with noise", "[protocol][property]") {
  double last = 1.1;
  for (double x : {1.0, 0.9, 0.7, 0.5, 0.2}) {
    const double o = truth_table_overlap(truth_table({x, 0.945, 0.0}));
    REQUIRE(o < last);
    last = o;
  }
  last = 1.1;
  for (double leak : {0.0, 0.01, 0.02, 0.05}) {
    const double o = truth_table_overlap(truth_table({1.0, 1.0, leak}));
    REQUIRE(o < last + 1e-12);
    last = o;
  }
}

TEST_CASE("noise parameters are range checked", "[protocol]") {
  REQUIRE_THROWS_AS(NoiseConfig({1.2, 1.0, 0.0}).validate(), ParameterError);
  REQUIRE_THROWS_AS(NoiseConfig({1.0, 0.2, 0.0}).validate(), ParameterError);
  REQUIRE_THROWS_AS(QubitPair::from_labels("X", "H"), ParameterError);
  REQUIRE_THROWS_AS(herald_probability({1.0, 1.0, 1.0, 0.0}, NoiseConfig{}), ParameterError);
}

TEST_CASE("Werner ensemble weights", "[protocol]") {
  const auto m = werner_members(0.945);
  REQUIRE(m.size() == 4);
  double total = 0.0;
  for (const auto& [b, w] : m) {
    total += w;
    if (b == Bell::PsiMinus) REQUIRE_THAT(w, WithinAbs(0.945, 1e-12));
  }
  REQUIRE_THAT(total, WithinAbs(1.0, 1e-12));
}
