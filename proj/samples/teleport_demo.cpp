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


// Runs the seven-pulse teleportation program for a user-chosen input qubit
// and compares the result with the ideal gate sequence.
//
//   teleport_demo [c0 c1]      (real amplitudes, normalised on input)

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "spinchain/dynamics.hpp"
#include "spinchain/teleport.hpp"

using namespace spinchain;

int main(int argc, char** argv) {
  InputQubit q;
  if (argc == 3) {
    const double a = std::atof(argv[1]);
    const double b = std::atof(argv[2]);
    const double n = std::hypot(a, b);
    if (n == 0.0) {
      std::fprintf(stderr, "amplitudes must not both be zero\n");
      return 2;
    }
    q = {{a / n, 0.0}, {b / n, 0.0}};
  }

  const Spectrum spectrum{ChainParams{}};
  const PulseProgram program = build_program(spectrum, 0.1);
  const ProgramResult run = apply_program(initial_state(q), program.pulses(), spectrum);

  const Probabilities p = probabilities(run.final_state);
  std::printf("state   simulated   ideal\n");
  const IdealState target = protocol_target(q);
  for (int m = 0; m < kNumStates; ++m) {
    std::printf("|%s>  %.6f    %.6f\n", BasisState(m).bits().c_str(), p[m], std::norm(target.amps[m]));
  }
  std::printf("|F| = %.9f\n", fidelity(run.final_state, target).magnitude);

  // Alice measures spins 3 and 2; Bob corrects spin 0.
  const IdealState psi3 = ideal_states(q).psi3;
  for (int outcome = 0; outcome < 4; ++outcome) {
    const BobQubit bob = measure_and_correct(psi3, outcome);
    std::printf("outcome %d%d: Bob overlap with input = %.12f\n", outcome >> 1, outcome & 1,
                qubit_overlap(q, bob));
  }
  return 0;
}
