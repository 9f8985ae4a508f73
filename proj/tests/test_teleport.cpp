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

#include "oracles.hpp"
#include "spinchain/teleport.hpp"

using namespace spinchain;
using Catch::Approx;

namespace {

double max_diff(const IdealState& a, const IdealState& b) { return oracle::max_abs_diff(a.amps, b.amps); }

}  // namespace

TEST_CASE("gate composition reproduces the closed forms", "[teleport][oracle]") {
  oracle::Gen gen(100);
  for (int trial = 0; trial < 100; ++trial) {
    const InputQubit q = trial == 0 ? InputQubit{} : gen.qubit();
    const IdealStates ideal = ideal_states(q);
    const IdealState s1 = attach_entangled(q);
    const IdealState s2 = cnot_3_to_2(s1);
    const IdealState s3 = hadamard_3(s2);
    REQUIRE(max_diff(s1, ideal.psi1) < 1e-15);
    REQUIRE(max_diff(s2, ideal.psi2) < 1e-15);
    REQUIRE(max_diff(s3, ideal.psi3) < 1e-15);
    REQUIRE(s3.norm_squared() == Approx(1.0).margin(1e-14));
  }
}

TEST_CASE("gates are involutions", "[teleport][property]") {
  oracle::Gen gen(101);
  for (int trial = 0; trial < 50; ++trial) {
    IdealState s;
    s.amps = gen.state().amps;
    REQUIRE(max_diff(cnot_3_to_2(cnot_3_to_2(s)), s) < 1e-15);
    REQUIRE(max_diff(hadamard_3(hadamard_3(s)), s) < 1e-15);
    REQUIRE(max_diff(pauli_z(pauli_z(s, 2), 2), s) == 0.0);
  }
}

TEST_CASE("every measurement branch teleports the qubit", "[teleport][oracle]") {
  oracle::Gen gen(102);
  for (int trial = 0; trial < 100; ++trial) {
    const InputQubit q = gen.qubit();
    const IdealState psi3 = ideal_states(q).psi3;
    for (int outcome = 0; outcome < 4; ++outcome) {
      const BobQubit bob = measure_and_correct(psi3, outcome);
      REQUIRE(std::abs(qubit_overlap(q, bob) - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("measurement branches carry probability 1/4", "[teleport]") {
  const IdealState psi3 = ideal_states(InputQubit{}).psi3;
  for (int outcome = 0; outcome < 4; ++outcome) {
    const int base = outcome << 2;
    CHECK(std::norm(psi3.amps[base]) + std::norm(psi3.amps[base | 1]) == Approx(0.25));
  }
  CHECK_THROWS_AS(measure_and_correct(psi3, 4), ConfigError);
  IdealState empty;
  empty.amps[0] = 1.0;
  CHECK_THROWS_AS(measure_and_correct(empty, 1), ConfigError);
  IdealState leaky;
  leaky.amps[0] = leaky.amps[2] = 1.0 / std::sqrt(2.0);
  CHECK_THROWS_AS(measure_and_correct(leaky, 0), ConfigError);
}

TEST_CASE("reference state for the pulse program", "[teleport]") {
  const InputQubit q;
  const IdealStates ideal = ideal_states(q);
  const IdealState target = protocol_target(q);
  CHECK(std::abs(fidelity(target.amps, ideal.psi3.amps).overlap) < 1e-15);
  for (int m = 0; m < kNumStates; ++m) CHECK(std::abs(target.amps[m]) == std::abs(ideal.psi3.amps[m]));
  // Bob's qubit is still recovered from the reference state in every branch.
  for (int outcome = 0; outcome < 4; ++outcome) {
    CHECK(qubit_overlap(q, measure_and_correct(target, outcome)) == Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("program layout", "[teleport]") {
  const PulseProgram program = build_program(ChainParams{}, 0.1);
  REQUIRE(program.size() == 7);
  CHECK(program.stage_end(Stage::entangle) == 3);
  CHECK(program.stage_end(Stage::cnot) == 5);
  CHECK(program.stage_end(Stage::hadamard) == 7);
  const auto pulses = program.pulses();
  CHECK(pulses[0].carrier == Approx(420.4).margin(1e-12));
  CHECK(pulses[2].carrier == Approx(109.6).margin(1e-12));
  for (std::size_t i = 0; i < pulses.size(); ++i) {
    const double expected = kProtocolPulses[i].angle == kPi ? 5.0 : 2.5;
    CHECK(pulses[i].duration() == Approx(expected).epsilon(1e-14));
    CHECK(pulses[i].label->first.index() == kProtocolPulses[i].lower);
    CHECK(pulses[i].label->second.index() == kProtocolPulses[i].upper);
  }
}

TEST_CASE("resonant-only propagation yields the reference state", "[teleport][oracle]") {
  // Keep only the couplings exactly resonant with each carrier; the program
  // then acts as the ideal gate sequence.
  oracle::Gen gen(103);
  const Spectrum s{ChainParams{}};
  const PulseProgram program = build_program(s, 0.1);
  for (int trial = 0; trial < 20; ++trial) {
    const InputQubit q = trial == 0 ? InputQubit{} : gen.qubit();
    StateVector state = initial_state(q);
    std::vector<StateVector> after;
    for (const Pulse& p : program.pulses()) {
      CouplingMask mask;
      for (int t = 0; t < kNumTransitions; ++t) mask.set(t, std::abs(s.transitions()[t].gap - p.carrier) < 1e-9);
      state = oracle::exact_program(state, std::span(&p, 1), s, PulseClock::local, mask);
      after.push_back(state);
    }
    const IdealStates ideal = ideal_states(q);
    const IdealStates targets = protocol_stage_targets(q);
    CHECK(fidelity(after[2], targets.psi1).magnitude == Approx(1.0).margin(1e-10));
    CHECK(fidelity(after[4], targets.psi2).magnitude == Approx(1.0).margin(1e-10));
    CHECK(fidelity(state, protocol_target(q)).magnitude == Approx(1.0).margin(1e-10));
    CHECK(oracle::max_abs_diff(targets.psi3.amps, protocol_target(q).amps) == 0.0);
    // The literal closed forms differ by a local Z and are orthogonal.
    CHECK(fidelity(after[2], ideal.psi1).magnitude < 1e-10);
    CHECK(fidelity(state, ideal.psi3).magnitude < 1e-10);
  }
}

TEST_CASE("full protocol at the reference parameters", "[teleport]") {
  const Spectrum s{ChainParams{}};
  const InputQubit q;
  const PulseProgram program = build_program(s, 0.1);
  const ProgramResult run = apply_program(initial_state(q), program.pulses(), s);
  const Fidelity f = fidelity(run.final_state, protocol_target(q));
  CHECK(f.magnitude == Approx(0.998621757).margin(1e-6));
  const Probabilities p = probabilities(run.final_state);
  for (int m : {0, 5, 8, 13}) CHECK(p[m] == Approx(1.0 / 36.0).margin(0.02));
  for (int m : {1, 4, 9, 12}) CHECK(p[m] == Approx(2.0 / 9.0).margin(0.02));
  for (int m : {2, 3, 6, 7, 10, 11, 14, 15}) CHECK(p[m] < 1e-6);
}

TEST_CASE("input validation", "[teleport]") {
  InputQubit q;
  q.c1 = 0.5;
  CHECK_THROWS_AS(q.validate(), ConfigError);
  CHECK_THROWS_AS(initial_state(q), ConfigError);
  CHECK_THROWS_AS(build_program(ChainParams{}, 0.0), ConfigError);
}
