// Copyright 2026 The spinchain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "oracles.hpp"
#include "spinchain/spin_model.hpp"

using namespace spinchain;
using Catch::Approx;

TEST_CASE("reference energies", "[spin_model]") {
  const Spectrum s{ChainParams{}};
  CHECK(s.energy(BasisState(0)) == Approx(-765.4).margin(1e-12));
  CHECK(s.energy(BasisState(15)) == Approx(734.6).margin(1e-12));
  CHECK(s.frequency(BasisState(4), BasisState(0)) == Approx(420.4).margin(1e-12));
  CHECK(s.frequency(BasisState(5), BasisState(4)) == Approx(109.6).margin(1e-12));
  CHECK(s.frequency(BasisState(0), BasisState(4)) == Approx(-420.4).margin(1e-12));
}

TEST_CASE("energies match the Kronecker-product Hamiltonian", "[spin_model][oracle]") {
  oracle::Gen gen(11);
  for (int trial = 0; trial < 200; ++trial) {
    const ChainParams p = trial == 0 ? ChainParams{} : gen.chain();
    const auto ref = oracle::kron_energies(p);
    const Spectrum s(p);
    for (int m = 0; m < kNumStates; ++m) {
      REQUIRE(std::abs(s.energy(BasisState(m)) - ref[m]) <= 1e-12 * (1.0 + std::abs(ref[m])));
    }
    for (const auto& t : s.transitions()) {
      REQUIRE(std::abs(t.gap - (ref[t.upper.index()] - ref[t.lower.index()])) <= 1e-11);
    }
  }
}

TEST_CASE("basis state helpers", "[spin_model]") {
  const BasisState s(0b1010);
  CHECK(s.bits() == "1010");
  CHECK(s.bit(1) == 1);
  CHECK(s.bit(0) == 0);
  CHECK(s.excitations() == 2);
  CHECK(s.flipped(0).index() == 0b1011);
  CHECK_THROWS_AS(BasisState(16), std::out_of_range);
  CHECK_THROWS_AS(BasisState(-1), std::out_of_range);
}

TEST_CASE("single-flip partners", "[spin_model]") {
  for (int m = 0; m < kNumStates; ++m) {
    const auto partners = single_flip_partners(BasisState(m));
    for (int k = 0; k < kNumSpins; ++k) {
      CHECK(partners[k].spin == k);
      CHECK(partners[k].partner.index() == (m ^ (1 << k)));
      CHECK(flipped_spin(BasisState(m), partners[k].partner) == k);
    }
  }
  CHECK(flipped_spin(BasisState(0), BasisState(3)) == -1);
  CHECK(flipped_spin(BasisState(5), BasisState(5)) == -1);
}

TEST_CASE("transition table", "[spin_model]") {
  const Spectrum s{ChainParams{}};
  std::set<std::pair<int, int>> seen;
  for (const auto& t : s.transitions()) {
    CHECK(t.lower.bit(t.spin) == 0);
    CHECK(t.upper == t.lower.flipped(t.spin));
    CHECK(t.gap > 0.0);
    seen.insert({t.lower.index(), t.upper.index()});
  }
  CHECK(seen.size() == kNumTransitions);
}

TEST_CASE("frequencies are antisymmetric and sum to zero around loops", "[spin_model][property]") {
  oracle::Gen gen(5);
  for (int trial = 0; trial < 100; ++trial) {
    const Spectrum s(gen.chain());
    for (int m = 0; m < kNumStates; ++m) {
      for (int k = 0; k < kNumStates; ++k) {
        const BasisState a(m), b(k);
        REQUIRE(s.frequency(a, b) == -s.frequency(b, a));
        REQUIRE(std::abs(s.frequency(a, b) - (s.energy(a) - s.energy(b))) <= 1e-10);
      }
    }
    // Flip spin i then j, versus j then i.
    for (int m = 0; m < kNumStates; ++m) {
      for (int i = 0; i < kNumSpins; ++i) {
        for (int j = 0; j < kNumSpins; ++j) {
          if (i == j) continue;
          const BasisState a(m);
          const double path1 = s.frequency(a.flipped(i), a) + s.frequency(a.flipped(i).flipped(j), a.flipped(i));
          const double path2 = s.frequency(a.flipped(j), a) + s.frequency(a.flipped(j).flipped(i), a.flipped(j));
          REQUIRE(std::abs(path1 - path2) <= 1e-10);
        }
      }
    }
  }
}

TEST_CASE("transition families", "[spin_model]") {
  const ChainParams p;
  const Spectrum s(p);
  for (const auto& t : s.transitions()) {
    const double shift = t.gap - p.omega[t.spin];
    // Spins at the ends have one first neighbour; every spin has one second neighbour.
    const bool end = t.spin == 0 || t.spin == 3;
    std::vector<double> allowed;
    for (int a : end ? std::vector<int>{-1, 1} : std::vector<int>{-2, 0, 2}) {
      for (int b : {-1, 1}) allowed.push_back(a * p.j1 + b * p.j2);
    }
    const bool ok = std::any_of(allowed.begin(), allowed.end(), [&](double v) { return std::abs(v - shift) < 1e-12; });
    CHECK(ok);
  }
}

TEST_CASE("degeneracies follow from equal neighbour bits", "[spin_model][property]") {
  oracle::Gen gen(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Spectrum s(trial == 0 ? ChainParams{} : gen.chain());
    const auto tr = s.transitions();
    for (const auto& a : tr) {
      for (const auto& b : tr) {
        if (a.spin != b.spin) continue;
        bool same_neighbours = true;
        for (int n = 0; n < kNumSpins; ++n) {
          const int d = std::abs(n - a.spin);
          if ((d == 1 || d == 2) && a.lower.bit(n) != b.lower.bit(n)) same_neighbours = false;
        }
        if (same_neighbours) REQUIRE(a.gap == b.gap);  // bit-exact
      }
    }
    CHECK(s.frequency(BasisState(5), BasisState(4)) == s.frequency(BasisState(13), BasisState(12)));
    CHECK(s.frequency(BasisState(8), BasisState(0)) == s.frequency(BasisState(9), BasisState(1)));
  }
}

TEST_CASE("without second-neighbour coupling the families merge", "[spin_model]") {
  ChainParams p;
  p.j2 = 0.0;
  const Spectrum s(p);
  std::set<double> distinct;
  for (const auto& t : s.transitions()) distinct.insert(t.gap);
  // ends: w +- J (2 each); interior: w + {-2J, 0, 2J} (3 each)
  CHECK(distinct.size() == 2 + 3 + 3 + 2);
  ChainParams q;
  const Spectrum sq(q);
  std::set<double> with_j2;
  for (const auto& t : sq.transitions()) with_j2.insert(t.gap);
  CHECK(with_j2.size() == 2 * distinct.size());
}

TEST_CASE("resonance lookup", "[spin_model]") {
  const Spectrum s{ChainParams{}};
  const auto r = s.resonant(109.6, 1e-9);
  REQUIRE(r.size() == 2);
  CHECK(r[0].lower.index() == 4);
  CHECK(r[1].lower.index() == 12);
  const auto r08 = resonant_transitions(s.frequency(BasisState(8), BasisState(0)), kResonanceTol, ChainParams{});
  REQUIRE(r08.size() == 2);
  CHECK(r08[0].lower.index() == 0);
  CHECK(r08[1].lower.index() == 1);
  CHECK(s.resonant(420.4).size() == 1);
  CHECK(s.resonant(1000.0).empty());
  CHECK_THROWS_AS(s.resonant(100.0, -1.0), ConfigError);
}

TEST_CASE("parameter validation", "[spin_model]") {
  ChainParams p;
  p.omega[1] = p.omega[0];
  CHECK_THROWS_AS(Spectrum(p), ConfigError);
  p = {};
  p.j1 = 0.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.j2 = -0.1;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.omega[3] = std::nan("");
  CHECK_THROWS_WITH(p.validate(), Catch::Matchers::ContainsSubstring("chain.omega3"));
}
