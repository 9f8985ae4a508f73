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

// Interaction-picture amplitude dynamics under a circularly polarised RF
// pulse. Amplitudes are D_m with C_m = D_m exp(-i E_m t); all 32 single-flip
// couplings are integrated (no rotating-wave truncation beyond the rotating
// field itself).
//
// Matrix elements: for a pair (lower m, upper p) of spin s
//   W_mp = -(Omega/2) exp(+i(w t + phi)),  W_pm = conj(W_mp),
// so that
//   dD_m/dt = i (Omega/2) exp(i(phi + (w - gap) t)) D_p
//   dD_p/dt = i (Omega/2) exp(-i(phi + (w - gap) t)) D_m
// with gap = E_p - E_m. Frequencies carry the 2*pi factor internally.

#pragma once

#include <array>
#include <bitset>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spinchain/errors.hpp"
#include "spinchain/spin_model.hpp"

namespace spinchain {

using Complex = std::complex<double>;
using Amplitudes = std::array<Complex, kNumStates>;
using Probabilities = std::array<double, kNumStates>;
using SpinExpectations = std::array<double, kNumSpins>;
using CouplingMask = std::bitset<kNumTransitions>;

struct StateVector {
  Amplitudes amps{};
  double frame_time = 0.0;  ///< elapsed time, microseconds

  static StateVector basis(BasisState s) {
    StateVector v;
    v.amps[s.index()] = 1.0;
    return v;
  }

  double norm_squared() const {
    double n = 0.0;
    for (const auto& a : amps) n += std::norm(a);
    return n;
  }
};

struct Pulse {
  double angle = kPi;     ///< rotation angle Omega*tau, radians
  double rabi = 0.1;      ///< Omega, 2*pi*MHz
  double carrier = 0.0;   ///< w, 2*pi*MHz
  double phase = 0.0;     ///< phi, radians
  std::optional<std::pair<BasisState, BasisState>> label;

  /// tau in microseconds.
  double duration() const { return angle / (kTwoPi * rabi); }

  void validate() const {
    if (!std::isfinite(angle) || angle <= 0.0) throw ConfigError("pulse angle must be finite and > 0");
    if (!std::isfinite(rabi) || rabi <= 0.0) throw ConfigError("pulse rabi must be finite and > 0");
    if (!std::isfinite(carrier)) throw ConfigError("pulse carrier must be finite");
    if (!std::isfinite(phase)) throw ConfigError("pulse phase must be finite");
    if (!std::isfinite(duration())) throw ConfigError("pulse duration is not finite");
  }
};

/// Time origin used inside the matrix elements.
enum class PulseClock {
  local,   ///< every pulse integrates from t = 0
  global,  ///< t is the accumulated frame time
};

inline CouplingMask all_couplings() { return CouplingMask{}.set(); }

struct IntegratorConfig {
  double max_phase_step = 0.1;            ///< radians per step, in (0, 0.5]
  std::optional<double> hard_step;        ///< fixed step override, microseconds
  std::int64_t max_steps = 400'000'000;   ///< per pulse
  PulseClock clock = PulseClock::local;
  CouplingMask couplings = all_couplings();  ///< indexed like Spectrum::transitions()

  void validate() const {
    if (!(max_phase_step > 0.0 && max_phase_step <= 0.5)) {
      throw ConfigError("integrator.max_phase_step must be in (0, 0.5]");
    }
    if (hard_step && !(*hard_step > 0.0 && std::isfinite(*hard_step))) {
      throw ConfigError("integrator.hard_step must be finite and > 0");
    }
    if (max_steps <= 0) throw ConfigError("integrator.max_steps must be > 0");
  }

  bool operator==(const IntegratorConfig&) const = default;
};

/// Mask selecting the couplings whose pairs appear in `pairs` (either order).
inline CouplingMask couplings_for(const Spectrum& spectrum,
                                  std::span<const std::pair<BasisState, BasisState>> pairs) {
  CouplingMask mask;
  const auto table = spectrum.transitions();
  for (std::size_t q = 0; q < table.size(); ++q) {
    for (const auto& [a, b] : pairs) {
      if ((table[q].lower == a && table[q].upper == b) ||
          (table[q].lower == b && table[q].upper == a)) {
        mask.set(q);
      }
    }
  }
  return mask;
}

inline Probabilities probabilities(const StateVector& s) {
  Probabilities p{};
  for (int m = 0; m < kNumStates; ++m) p[m] = std::norm(s.amps[m]);
  return p;
}

/// <I_k^z> = 1/2 sum_m (-1)^{bit_k(m)} |D_m|^2.
inline SpinExpectations spin_expectations(const StateVector& s) {
  SpinExpectations iz{};
  for (int m = 0; m < kNumStates; ++m) {
    const double w = std::norm(s.amps[m]);
    for (int k = 0; k < kNumSpins; ++k) iz[k] += ((m >> k) & 1) ? -0.5 * w : 0.5 * w;
  }
  return iz;
}

/// Lab-frame amplitudes C_m = D_m exp(-i E_m t). Debug aid only; every
/// observable used elsewhere depends on |D_m| = |C_m|.
inline Amplitudes to_lab_frame(const StateVector& s, const Spectrum& spectrum) {
  Amplitudes c{};
  for (int m = 0; m < kNumStates; ++m) {
    c[m] = s.amps[m] * std::polar(1.0, -kTwoPi * spectrum.energies()[m] * s.frame_time);
  }
  return c;
}

/// dD/dt at pulse-clock time `t` (microseconds), evaluated term by term from
/// the matrix elements: i dD_m/dt = sum_k W_mk D_k exp(i w_mk t).
inline Amplitudes rhs(const StateVector& state, double t, const Pulse& pulse,
                      const Spectrum& spectrum, const CouplingMask& couplings = all_couplings()) {
  const double half_rabi = 0.5 * kTwoPi * pulse.rabi;
  const double drive = kTwoPi * pulse.carrier * t + pulse.phase;
  Amplitudes d{};
  const auto table = spectrum.transitions();
  for (std::size_t q = 0; q < table.size(); ++q) {
    if (!couplings.test(q)) continue;
    const int m = table[q].lower.index();
    const int p = table[q].upper.index();
    const Complex w_mp = -half_rabi * std::polar(1.0, drive);
    const Complex w_pm = std::conj(w_mp);
    const double w_mk = -kTwoPi * table[q].gap;  // (E_m - E_p)
    d[m] += -Complex(0.0, 1.0) * w_mp * state.amps[p] * std::polar(1.0, w_mk * t);
    d[p] += -Complex(0.0, 1.0) * w_pm * state.amps[m] * std::polar(1.0, -w_mk * t);
  }
  return d;
}

inline Amplitudes rhs(const StateVector& state, double t, const Pulse& pulse,
                      const ChainParams& params) {
  return rhs(state, t, pulse, Spectrum(params));
}

struct TrajectorySample {
  double t_us = 0.0;
  Probabilities probs{};
  SpinExpectations iz{};
};

struct StepPlan {
  std::int64_t steps = 0;
  double h = 0.0;  ///< microseconds
};

namespace detail {

/// Split-real RK4 kernel for one pulse. Phasors exp(i(phi + delta_q t)) are
/// advanced by half-step rotors and re-evaluated exactly every kResync steps.
class PulseKernel {
 public:
  static constexpr std::int64_t kResync = 512;

  PulseKernel(const Pulse& pulse, const Spectrum& spectrum, const CouplingMask& couplings)
      : half_rabi_(0.5 * kTwoPi * pulse.rabi), phase_(pulse.phase) {
    const auto table = spectrum.transitions();
    for (std::size_t q = 0; q < table.size(); ++q) {
      if (!couplings.test(q)) continue;
      lower_[n_] = table[q].lower.index();
      upper_[n_] = table[q].upper.index();
      detuning_[n_] = kTwoPi * (pulse.carrier - table[q].gap);
      ++n_;
    }
  }

  /// Largest phase rate (rad/us) present in the equations.
  double max_rate() const {
    double r = 2.0 * half_rabi_;
    for (int q = 0; q < n_; ++q) r = std::max(r, std::abs(detuning_[q]));
    return r;
  }

  void run(std::array<double, kNumStates>& xr, std::array<double, kNumStates>& xi,
           double clock0, const StepPlan& plan, const auto& on_step) const {
    const double h = plan.h;
    std::array<double, kNumTransitions> u0r{}, u0i{}, umr{}, umi{}, uer{}, uei{};
    std::array<double, kNumTransitions> rot_r{}, rot_i{};
    for (int q = 0; q < n_; ++q) {
      rot_r[q] = std::cos(0.5 * h * detuning_[q]);
      rot_i[q] = std::sin(0.5 * h * detuning_[q]);
    }
    Vec k1r, k1i, k2r, k2i, k3r, k3i, k4r, k4i, yr, yi;
    for (std::int64_t step = 0; step < plan.steps; ++step) {
      if (step % kResync == 0) {
        const double t = clock0 + static_cast<double>(step) * h;
        for (int q = 0; q < n_; ++q) {
          const double a = phase_ + detuning_[q] * t;
          u0r[q] = std::cos(a);
          u0i[q] = std::sin(a);
        }
      }
      for (int q = 0; q < n_; ++q) {
        umr[q] = u0r[q] * rot_r[q] - u0i[q] * rot_i[q];
        umi[q] = u0r[q] * rot_i[q] + u0i[q] * rot_r[q];
        uer[q] = umr[q] * rot_r[q] - umi[q] * rot_i[q];
        uei[q] = umr[q] * rot_i[q] + umi[q] * rot_r[q];
      }
      derivative(xr, xi, u0r, u0i, k1r, k1i);
      for (int m = 0; m < kNumStates; ++m) {
        yr[m] = xr[m] + 0.5 * h * k1r[m];
        yi[m] = xi[m] + 0.5 * h * k1i[m];
      }
      derivative(yr, yi, umr, umi, k2r, k2i);
      for (int m = 0; m < kNumStates; ++m) {
        yr[m] = xr[m] + 0.5 * h * k2r[m];
        yi[m] = xi[m] + 0.5 * h * k2i[m];
      }
      derivative(yr, yi, umr, umi, k3r, k3i);
      for (int m = 0; m < kNumStates; ++m) {
        yr[m] = xr[m] + h * k3r[m];
        yi[m] = xi[m] + h * k3i[m];
      }
      derivative(yr, yi, uer, uei, k4r, k4i);
      const double w = h / 6.0;
      for (int m = 0; m < kNumStates; ++m) {
        xr[m] += w * (k1r[m] + 2.0 * (k2r[m] + k3r[m]) + k4r[m]);
        xi[m] += w * (k1i[m] + 2.0 * (k2i[m] + k3i[m]) + k4i[m]);
      }
      u0r = uer;
      u0i = uei;
      on_step(step + 1);
    }
  }

 private:
  using Vec = std::array<double, kNumStates>;
  using PairVec = std::array<double, kNumTransitions>;

  void derivative(const Vec& xr, const Vec& xi, const PairVec& ur, const PairVec& ui, Vec& dr,
                  Vec& di) const {
    dr.fill(0.0);
    di.fill(0.0);
    const double g = half_rabi_;
    for (int q = 0; q < n_; ++q) {
      const int m = lower_[q];
      const int p = upper_[q];
      // i g u D_p
      const double ar = ur[q] * xr[p] - ui[q] * xi[p];
      const double ai = ur[q] * xi[p] + ui[q] * xr[p];
      dr[m] -= g * ai;
      di[m] += g * ar;
      // i g conj(u) D_m
      const double br = ur[q] * xr[m] + ui[q] * xi[m];
      const double bi = ur[q] * xi[m] - ui[q] * xr[m];
      dr[p] -= g * bi;
      di[p] += g * br;
    }
  }

  double half_rabi_;
  double phase_;
  int n_ = 0;
  std::array<int, kNumTransitions> lower_{};
  std::array<int, kNumTransitions> upper_{};
  PairVec detuning_{};
};

inline TrajectorySample sample_of(const StateVector& s) {
  return {s.frame_time, probabilities(s), spin_expectations(s)};
}

}  // namespace detail

/// Step count and size for one pulse: the fastest phase in the equations
/// advances by at most cfg.max_phase_step per step, unless hard_step is set.
inline StepPlan plan_steps(const Pulse& pulse, const Spectrum& spectrum,
                           const IntegratorConfig& cfg) {
  pulse.validate();
  cfg.validate();
  const double tau = pulse.duration();
  double h_max = 0.0;
  if (cfg.hard_step) {
    h_max = *cfg.hard_step;
  } else {
    const double rate = detail::PulseKernel(pulse, spectrum, cfg.couplings).max_rate();
    h_max = cfg.max_phase_step / rate;
  }
  const double n = std::ceil(tau / h_max);
  if (!(n <= static_cast<double>(cfg.max_steps))) {
    throw NumericalError("pulse needs " + std::to_string(n) + " steps (tau = " +
                         std::to_string(tau) + " us), above integrator.max_steps = " +
                         std::to_string(cfg.max_steps));
  }
  StepPlan plan;
  plan.steps = std::max<std::int64_t>(1, static_cast<std::int64_t>(n));
  plan.h = tau / static_cast<double>(plan.steps);
  return plan;
}

/// Advances `state` through one pulse. When `trajectory` is non-null,
/// appends `samples` evenly spaced snapshots (first and last included).
inline StateVector apply_pulse(const StateVector& state, const Pulse& pulse,
                               const Spectrum& spectrum, const IntegratorConfig& cfg = {},
                               std::vector<TrajectorySample>* trajectory = nullptr,
                               int samples = 2000) {
  const StepPlan plan = plan_steps(pulse, spectrum, cfg);
  const detail::PulseKernel kernel(pulse, spectrum, cfg.couplings);

  std::array<double, kNumStates> xr{}, xi{};
  for (int m = 0; m < kNumStates; ++m) {
    xr[m] = state.amps[m].real();
    xi[m] = state.amps[m].imag();
  }
  const double t0 = state.frame_time;
  const double clock0 = cfg.clock == PulseClock::global ? t0 : 0.0;

  auto snapshot = [&](std::int64_t step) {
    StateVector s;
    for (int m = 0; m < kNumStates; ++m) s.amps[m] = {xr[m], xi[m]};
    s.frame_time = t0 + static_cast<double>(step) * plan.h;
    trajectory->push_back(detail::sample_of(s));
  };

  if (trajectory == nullptr || samples <= 0) {
    kernel.run(xr, xi, clock0, plan, [](std::int64_t) {});
  } else {
    const std::int64_t count = std::min<std::int64_t>(samples, plan.steps + 1);
    std::int64_t next = 1;
    auto sample_step = [&](std::int64_t k) {
      if (count == 1) return plan.steps;
      return static_cast<std::int64_t>(
          std::llround(static_cast<double>(k) * static_cast<double>(plan.steps) /
                       static_cast<double>(count - 1)));
    };
    snapshot(0);
    kernel.run(xr, xi, clock0, plan, [&](std::int64_t step) {
      while (next < count && sample_step(next) == step) {
        snapshot(step);
        ++next;
      }
    });
  }

  StateVector out;
  for (int m = 0; m < kNumStates; ++m) {
    if (!std::isfinite(xr[m]) || !std::isfinite(xi[m])) {
      throw NumericalError("non-finite amplitude after pulse");
    }
    out.amps[m] = {xr[m], xi[m]};
  }
  out.frame_time = t0 + pulse.duration();
  return out;
}

inline StateVector apply_pulse(const StateVector& state, const Pulse& pulse,
                               const ChainParams& params, const IntegratorConfig& cfg = {}) {
  return apply_pulse(state, pulse, Spectrum(params), cfg);
}

struct ProgramOptions {
  bool record_trajectory = false;
  int samples_per_pulse = 2000;
};

struct ProgramResult {
  StateVector final_state;
  std::vector<StateVector> after_pulse;  ///< one entry per pulse
  std::vector<TrajectorySample> trajectory;
};

/// Applies the pulses left to right.
inline ProgramResult apply_program(const StateVector& state, std::span<const Pulse> program,
                                   const Spectrum& spectrum, const IntegratorConfig& cfg = {},
                                   const ProgramOptions& options = {}) {
  ProgramResult result;
  result.final_state = state;
  result.after_pulse.reserve(program.size());
  for (const Pulse& pulse : program) {
    result.final_state =
        apply_pulse(result.final_state, pulse, spectrum, cfg,
                    options.record_trajectory ? &result.trajectory : nullptr,
                    options.samples_per_pulse);
    result.after_pulse.push_back(result.final_state);
  }
  if (options.record_trajectory && program.empty()) {
    result.trajectory.push_back(detail::sample_of(state));
  }
  return result;
}

}  // namespace spinchain
