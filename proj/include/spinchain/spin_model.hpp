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

// Static spectrum of a four-spin Ising chain with first (J) and second (J')
// neighbour couplings.
//
// Units: every frequency is the numeric value in 2*pi*MHz, i.e. a value f
// advances a phase by 2*pi*f radians per microsecond. Energies are E/hbar in
// the same units.
//
// Basis: |i3 i2 i1 i0> is stored as the integer index with i0 the least
// significant bit. Bit value 0 is the ground orientation (m_z = +1/2), bit
// value 1 the excited one.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spinchain/errors.hpp"

namespace spinchain {

inline constexpr int kNumSpins = 4;
inline constexpr int kNumStates = 16;
inline constexpr int kNumTransitions = 32;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Default tolerance (2*pi*MHz) for matching a carrier against transitions.
inline constexpr double kResonanceTol = 1e-9;

struct ChainParams {
  std::array<double, kNumSpins> omega{100.0, 200.0, 400.0, 800.0};
  double j1 = 10.0;  ///< first-neighbour coupling J
  double j2 = 0.4;   ///< second-neighbour coupling J'

  /// Throws ConfigError naming the offending field.
  void validate() const {
    for (int k = 0; k < kNumSpins; ++k) {
      if (!std::isfinite(omega[k]) || omega[k] <= 0.0) {
        throw ConfigError("chain.omega" + std::to_string(k) +
                          ": Larmor frequency must be finite and > 0");
      }
      for (int q = 0; q < k; ++q) {
        if (omega[q] == omega[k]) {
          throw ConfigError("chain.omega" + std::to_string(k) +
                            ": Larmor frequencies must be pairwise distinct");
        }
      }
    }
    if (!std::isfinite(j1) || j1 <= 0.0) {
      throw ConfigError("chain.j1: coupling J must be finite and > 0");
    }
    if (!std::isfinite(j2) || j2 < 0.0) {
      throw ConfigError("chain.j2: coupling J' must be finite and >= 0");
    }
  }

  bool operator==(const ChainParams&) const = default;
};

class BasisState {
 public:
  constexpr BasisState() = default;
  constexpr explicit BasisState(int index) : index_(static_cast<std::uint8_t>(index)) {
    if (index < 0 || index >= kNumStates) {
      throw std::out_of_range("BasisState index must be in [0, 15]");
    }
  }

  constexpr int index() const { return index_; }
  constexpr int bit(int spin) const { return (index_ >> spin) & 1; }
  constexpr BasisState flipped(int spin) const { return BasisState(index_ ^ (1 << spin)); }
  constexpr int excitations() const {
    return bit(0) + bit(1) + bit(2) + bit(3);
  }

  /// "i3i2i1i0", e.g. "0101" for index 5.
  std::string bits() const {
    std::string s(kNumSpins, '0');
    for (int k = 0; k < kNumSpins; ++k) s[kNumSpins - 1 - k] = bit(k) ? '1' : '0';
    return s;
  }

  constexpr auto operator<=>(const BasisState&) const = default;

 private:
  std::uint8_t index_ = 0;
};

namespace detail {
constexpr int parity_sign(int bit) { return bit ? -1 : 1; }
}  // namespace detail

/// E/hbar of a basis state:
///   -1/2 [ sum_k (-1)^{i_k} w_k + J sum_k (-1)^{i_k+i_{k+1}} + J' sum_k (-1)^{i_k+i_{k+2}} ]
inline double energy(BasisState s, const ChainParams& p) {
  double zeeman = 0.0;
  for (int k = 0; k < kNumSpins; ++k) zeeman += detail::parity_sign(s.bit(k)) * p.omega[k];
  double first = 0.0;
  for (int k = 0; k + 1 < kNumSpins; ++k) first += detail::parity_sign(s.bit(k) ^ s.bit(k + 1));
  double second = 0.0;
  for (int k = 0; k + 2 < kNumSpins; ++k) second += detail::parity_sign(s.bit(k) ^ s.bit(k + 2));
  return -0.5 * (zeeman + p.j1 * first + p.j2 * second);
}

/// E(upper) - E(lower) for flipping `spin` from 0 to 1, evaluated from the
/// neighbour bits only: w_s + J sum_{|n-s|=1} (-1)^{i_n} + J' sum_{|n-s|=2} (-1)^{i_n}.
/// Pairs with identical neighbour bits therefore get bit-identical values.
inline double flip_gap(BasisState s, int spin, const ChainParams& p) {
  double first = 0.0;
  double second = 0.0;
  for (int n = 0; n < kNumSpins; ++n) {
    const int d = n > spin ? n - spin : spin - n;
    if (d == 1) first += detail::parity_sign(s.bit(n));
    if (d == 2) second += detail::parity_sign(s.bit(n));
  }
  // Sum the coupling corrections first so the result does not depend on the
  // order of the neighbours.
  return p.omega[spin] + (p.j1 * first + p.j2 * second);
}

/// Index of the single flipped spin, or -1 when m and k differ in zero or
/// several bits.
inline int flipped_spin(BasisState m, BasisState k) {
  const int diff = m.index() ^ k.index();
  for (int s = 0; s < kNumSpins; ++s) {
    if (diff == (1 << s)) return s;
  }
  return -1;
}

/// Signed frequency w_mk = (E_m - E_k)/hbar. Antisymmetric in (m, k).
inline double transition_frequency(BasisState m, BasisState k, const ChainParams& p) {
  if (m == k) return 0.0;
  const int spin = flipped_spin(m, k);
  if (spin >= 0) {
    const double gap = flip_gap(m.bit(spin) ? k : m, spin, p);
    return m.bit(spin) ? gap : -gap;
  }
  return energy(m, p) - energy(k, p);
}

struct FlipPartner {
  BasisState partner;
  int spin;
  bool operator==(const FlipPartner&) const = default;
};

/// The four states reachable by one ladder operator, ordered by spin.
inline std::array<FlipPartner, kNumSpins> single_flip_partners(BasisState s) {
  std::array<FlipPartner, kNumSpins> out{};
  for (int k = 0; k < kNumSpins; ++k) out[k] = {s.flipped(k), k};
  return out;
}

/// One single-spin-flip pair. `lower` carries bit 0 on the flipped spin.
struct Transition {
  BasisState lower;
  BasisState upper;
  double gap = 0.0;  ///< E(upper) - E(lower), signed
  int spin = 0;

  double freq() const { return std::abs(gap); }
};

/// Energies and the 32-entry single-flip transition table for one
/// ChainParams. Built once and shared read-only by the integrator and the
/// sweep workers.
class Spectrum {
 public:
  explicit Spectrum(const ChainParams& params) : params_(params) {
    params_.validate();
    for (int m = 0; m < kNumStates; ++m) energies_[m] = spinchain::energy(BasisState(m), params_);
    int n = 0;
    for (int m = 0; m < kNumStates; ++m) {
      const BasisState lo(m);
      for (int spin = 0; spin < kNumSpins; ++spin) {
        if (lo.bit(spin)) continue;
        transitions_[n++] = {lo, lo.flipped(spin), flip_gap(lo, spin, params_), spin};
      }
    }
  }

  const ChainParams& params() const { return params_; }
  double energy(BasisState s) const { return energies_[s.index()]; }
  const std::array<double, kNumStates>& energies() const { return energies_; }
  std::span<const Transition, kNumTransitions> transitions() const { return transitions_; }

  /// Signed w_mk, see transition_frequency().
  double frequency(BasisState m, BasisState k) const {
    return transition_frequency(m, k, params_);
  }

  /// Single-flip pairs with | |w_mk| - freq | <= tol, in table order.
  std::vector<Transition> resonant(double freq, double tol = kResonanceTol) const {
    if (!(tol >= 0.0)) throw ConfigError("resonance tolerance must be >= 0");
    std::vector<Transition> out;
    for (const auto& t : transitions_) {
      if (std::abs(t.freq() - freq) <= tol) out.push_back(t);
    }
    return out;
  }

 private:
  ChainParams params_;
  std::array<double, kNumStates> energies_{};
  std::array<Transition, kNumTransitions> transitions_{};
};

inline std::vector<Transition> resonant_transitions(double freq, double tol,
                                                    const ChainParams& p) {
  return Spectrum(p).resonant(freq, tol);
}

}  // namespace spinchain
