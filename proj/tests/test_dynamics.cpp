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
#include "spinchain/dynamics.hpp"
#include "spinchain/teleport.hpp"

using namespace spinchain;
using Catch::Approx;

namespace {

// A chain with small Larmor frequencies keeps the step count low.
ChainParams small_chain() {
  ChainParams p;
  p.omega = {20.0, 45.0, 80.0, 130.0};
  p.j1 = 2.0;
  p.j2 = 0.3;
  return p;
}

Pulse random_pulse(oracle::Gen& gen, const Spectrum& s) {
  const auto& t = s.transitions()[gen.integer(0, kNumTransitions - 1)];
  Pulse p;
  p.angle = gen.uniform(0.2, 2.0 * kPi);
  p.rabi = gen.uniform(0.05, 0.5);
  p.carrier = t.gap + gen.uniform(-0.3, 0.3);
  p.phase = gen.uniform(-kPi, kPi);
  return p;
}

// Textbook RK4 on the term-by-term right-hand side.
StateVector rk4_reference(StateVector s, const Pulse& pulse, const Spectrum& spectrum, std::int64_t steps) {
  const double h = pulse.duration() / static_cast<double>(steps);
  auto axpy = [](const StateVector& x, const Amplitudes& k, double a) {
    StateVector y = x;
    for (int m = 0; m < kNumStates; ++m) y.amps[m] += a * k[m];
    return y;
  };
  for (std::int64_t i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) * h;
    const Amplitudes k1 = rhs(s, t, pulse, spectrum);
    const Amplitudes k2 = rhs(axpy(s, k1, 0.5 * h), t + 0.5 * h, pulse, spectrum);
    const Amplitudes k3 = rhs(axpy(s, k2, 0.5 * h), t + 0.5 * h, pulse, spectrum);
    const Amplitudes k4 = rhs(axpy(s, k3, h), t + h, pulse, spectrum);
    for (int m = 0; m < kNumStates; ++m) s.amps[m] += h / 6.0 * (k1[m] + 2.0 * k2[m] + 2.0 * k3[m] + k4[m]);
  }
  s.frame_time += pulse.duration();
  return s;
}

}  // namespace

TEST_CASE("kernel agrees with the term-by-term RK4", "[dynamics]") {
  oracle::Gen gen(21);
  const Spectrum s(small_chain());
  for (int trial = 0; trial < 5; ++trial) {
    Pulse p = random_pulse(gen, s);
    p.angle = 0.3;
    const StateVector in = gen.state();
    const std::int64_t steps = 3000;
    IntegratorConfig cfg;
    cfg.hard_step = p.duration() / static_cast<double>(steps) * (1.0 + 1e-12);
    REQUIRE(plan_steps(p, s, cfg).steps == steps);
    const StateVector fast = apply_pulse(in, p, s, cfg);
    const StateVector ref = rk4_reference(in, p, s, steps);
    CHECK(oracle::max_abs_diff(fast.amps, ref.amps) < 1e-10);
  }
}

TEST_CASE("single pulse matches the exact propagator", "[dynamics][oracle]") {
  oracle::Gen gen(7);
  const Spectrum s(small_chain());
  for (auto clock : {PulseClock::local, PulseClock::global}) {
    for (int trial = 0; trial < 12; ++trial) {
      const Pulse p = random_pulse(gen, s);
      StateVector in = gen.state();
      in.frame_time = gen.uniform(0.0, 20.0);
      IntegratorConfig cfg;
      cfg.clock = clock;
      const StateVector got = apply_pulse(in, p, s, cfg);
      const StateVector want = oracle::exact_program(in, std::span(&p, 1), s, clock);
      INFO("trial " << trial << " clock " << static_cast<int>(clock));
      CHECK(oracle::max_abs_diff(got.amps, want.amps) < 1e-8);
      CHECK(got.frame_time == Approx(in.frame_time + p.duration()));
    }
  }
}

TEST_CASE("restricted couplings match the exact propagator", "[dynamics][oracle]") {
  oracle::Gen gen(8);
  const Spectrum s(small_chain());
  for (int trial = 0; trial < 6; ++trial) {
    const Pulse p = random_pulse(gen, s);
    CouplingMask mask;
    for (int q = 0; q < kNumTransitions; ++q) mask.set(q, gen.integer(0, 1) == 1);
    IntegratorConfig cfg;
    cfg.couplings = mask;
    const StateVector in = gen.state();
    const StateVector got = apply_pulse(in, p, s, cfg);
    const StateVector want = oracle::exact_program(in, std::span(&p, 1), s, PulseClock::local, mask);
    CHECK(oracle::max_abs_diff(got.amps, want.amps) < 1e-8);
  }
}

TEST_CASE("full protocol matches the exact propagator", "[dynamics][oracle]") {
  const Spectrum s{ChainParams{}};
  const PulseProgram program = build_program(s, 0.1);
  const StateVector in = initial_state(InputQubit{});
  const ProgramResult run = apply_program(in, program.pulses(), s);
  const StateVector want = oracle::exact_program(in, program.pulses(), s);
  CHECK(oracle::max_abs_diff(run.final_state.amps, want.amps) < 1e-8);
}

TEST_CASE("norm is conserved", "[dynamics][property]") {
  oracle::Gen gen(9);
  const Spectrum s(small_chain());
  for (int trial = 0; trial < 20; ++trial) {
    const Pulse p = random_pulse(gen, s);
    const StateVector out = apply_pulse(gen.state(), p, s);
    REQUIRE(std::abs(out.norm_squared() - 1.0) < 1e-9);
  }
}

TEST_CASE("halving the step leaves the result unchanged", "[dynamics][property]") {
  oracle::Gen gen(10);
  const Spectrum s(small_chain());
  for (int trial = 0; trial < 6; ++trial) {
    const Pulse p = random_pulse(gen, s);
    const StateVector in = gen.state();
    IntegratorConfig coarse;
    IntegratorConfig fine;
    fine.max_phase_step = 0.5 * coarse.max_phase_step;
    const auto a = probabilities(apply_pulse(in, p, s, coarse));
    const auto b = probabilities(apply_pulse(in, p, s, fine));
    for (int m = 0; m < kNumStates; ++m) REQUIRE(std::abs(a[m] - b[m]) < 1e-9);
  }
}

TEST_CASE("isolated resonant pair: inverse pulse and double pi pulse", "[dynamics]") {
  const Spectrum s(small_chain());
  const Transition t = s.transitions()[5];
  const std::array pairs{std::pair{t.lower, t.upper}};
  IntegratorConfig cfg;
  cfg.couplings = couplings_for(s, pairs);
  cfg.max_phase_step = 0.02;  // only Omega sets the step here
  REQUIRE(cfg.couplings.count() == 1);

  Pulse p;
  p.carrier = t.gap;
  p.rabi = 0.2;
  p.phase = 0.7;

  SECTION("pi pulse swaps populations") {
    const StateVector out = apply_pulse(StateVector::basis(t.lower), p, s, cfg);
    CHECK(std::norm(out.amps[t.upper.index()]) == Approx(1.0).margin(1e-10));
  }
  SECTION("two pi pulses return with a sign flip") {
    StateVector out = apply_pulse(StateVector::basis(t.lower), p, s, cfg);
    out = apply_pulse(out, p, s, cfg);
    CHECK(std::abs(out.amps[t.lower.index()] + 1.0) < 1e-9);
  }
  SECTION("a pulse with opposite phase undoes the rotation") {
    oracle::Gen gen(1);
    StateVector in;
    const InputQubit q = gen.qubit();
    in.amps[t.lower.index()] = q.c0;
    in.amps[t.upper.index()] = q.c1;
    p.angle = 1.1;
    Pulse back = p;
    back.phase = p.phase + kPi;
    const StateVector out = apply_pulse(apply_pulse(in, p, s, cfg), back, s, cfg);
    CHECK(std::abs(out.amps[t.lower.index()] - q.c0) < 1e-9);
    CHECK(std::abs(out.amps[t.upper.index()] - q.c1) < 1e-9);
  }
}

TEST_CASE("vanishing angle leaves the state unchanged", "[dynamics]") {
  oracle::Gen gen(12);
  const Spectrum s(small_chain());
  Pulse p = random_pulse(gen, s);
  const StateVector in = gen.state();
  double prev = 1.0;
  for (double angle : {1e-2, 1e-4, 1e-6}) {
    p.angle = angle;
    const double d = oracle::max_abs_diff(apply_pulse(in, p, s).amps, in.amps);
    CHECK(d <= angle);
    CHECK(d < prev);
    prev = d;
  }
}

TEST_CASE("empty program", "[dynamics]") {
  const Spectrum s{ChainParams{}};
  const StateVector in = initial_state(InputQubit{});
  ProgramOptions opts;
  opts.record_trajectory = true;
  const ProgramResult r = apply_program(in, {}, s, {}, opts);
  CHECK(r.final_state.amps == in.amps);
  CHECK(r.after_pulse.empty());
  REQUIRE(r.trajectory.size() == 1);
  CHECK(r.trajectory[0].t_us == 0.0);
}

TEST_CASE("first pulse prepares an equal superposition", "[dynamics]") {
  const Spectrum s{ChainParams{}};
  const PulseProgram program = build_program(s, 0.1);
  const StateVector out = apply_pulse(StateVector::basis(BasisState(0)), program.pulses()[0], s);
  CHECK(std::norm(out.amps[0]) == Approx(0.5).margin(2e-3));
  CHECK(std::norm(out.amps[4]) == Approx(0.5).margin(2e-3));
  // Phase -pi/2: dD_0/dt = (Omega/2) D_4, dD_4/dt = -(Omega/2) D_0, so D_4 = -D_0.
  CHECK(std::abs(std::arg(out.amps[4] / out.amps[0])) == Approx(kPi).margin(0.05));
}

TEST_CASE("spin expectations", "[dynamics]") {
  const StateVector in = initial_state(InputQubit{});
  const auto iz = spin_expectations(in);
  CHECK(iz[3] == Approx(-7.0 / 18.0).margin(1e-15));
  for (int k = 0; k < 3; ++k) CHECK(iz[k] == Approx(0.5).margin(1e-15));
  const auto all_up = spin_expectations(StateVector::basis(BasisState(15)));
  for (double z : all_up) CHECK(z == -0.5);
}

TEST_CASE("trajectory sampling", "[dynamics]") {
  const Spectrum s{ChainParams{}};
  const PulseProgram program = build_program(s, 0.1);
  std::vector<TrajectorySample> traj;
  const Pulse& p = program.pulses()[0];
  apply_pulse(initial_state(InputQubit{}), p, s, {}, &traj, 2000);
  REQUIRE(traj.size() == 2000);
  CHECK(traj.front().t_us == 0.0);
  CHECK(traj.back().t_us == Approx(p.duration()).epsilon(1e-12));
  for (std::size_t i = 1; i < traj.size(); ++i) REQUIRE(traj[i].t_us > traj[i - 1].t_us);

  ProgramOptions opts;
  opts.record_trajectory = true;
  opts.samples_per_pulse = 50;
  const ProgramResult r = apply_program(initial_state(InputQubit{}), program.pulses().first(2), s, {}, opts);
  CHECK(r.trajectory.size() == 100);
  CHECK(r.trajectory.back().t_us == Approx(program.pulses()[0].duration() + program.pulses()[1].duration()));
}

TEST_CASE("lab frame transform keeps magnitudes", "[dynamics]") {
  oracle::Gen gen(4);
  const Spectrum s{ChainParams{}};
  StateVector in = gen.state();
  in.frame_time = 3.7;
  const Amplitudes c = to_lab_frame(in, s);
  for (int m = 0; m < kNumStates; ++m) CHECK(std::abs(c[m]) == Approx(std::abs(in.amps[m])));
}

TEST_CASE("integrator limits and validation", "[dynamics]") {
  const Spectrum s{ChainParams{}};
  Pulse p;
  p.carrier = 420.4;
  IntegratorConfig cfg;
  cfg.max_steps = 10;
  CHECK_THROWS_AS(apply_pulse(StateVector{}, p, s, cfg), NumericalError);
  cfg = {};
  cfg.max_phase_step = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.hard_step = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  p.rabi = 0.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.angle = std::nan("");
  CHECK_THROWS_AS(p.validate(), ConfigError);
}
