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

// Isolated two-level Rabi problem and the 2*pi*k choice of Rabi frequency
// that returns a detuned pair to its initial populations at the end of a
// pi or pi/2 pulse.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "spinchain/dynamics.hpp"
#include "spinchain/errors.hpp"
#include "spinchain/spin_model.hpp"

namespace spinchain {

/// p is the upper level, m the lower one; detuning = (E_p - E_m) - w.
struct TwoLevelParams {
  double rabi = 0.1;
  double detuning = 0.0;
  Complex c_p0{0.0, 0.0};
  Complex c_m0{1.0, 0.0};

  void validate() const {
    if (!std::isfinite(rabi) || rabi <= 0.0) throw ConfigError("two_level.rabi must be > 0");
    if (!std::isfinite(detuning)) throw ConfigError("two_level.delta must be finite");
    const double n = std::norm(c_p0) + std::norm(c_m0);
    if (std::abs(n - 1.0) > 1e-12) {
      throw ConfigError("two_level: |c_p0|^2 + |c_m0|^2 must equal 1");
    }
  }
};

struct TwoLevelAmplitudes {
  Complex d_p;
  Complex d_m;
};

/// Closed-form amplitudes at time t (microseconds), Omega_e = sqrt(Omega^2 + Delta^2):
///   D_p = {C_p [cos - i (D/Oe) sin] + i (O/Oe) C_m sin} exp(+i D t/2)
///   D_m = {C_m [cos + i (D/Oe) sin] + i (O/Oe) C_p sin} exp(-i D t/2)
/// with cos, sin evaluated at Oe t / 2.
inline TwoLevelAmplitudes analytic_evolution(const TwoLevelParams& p, double t) {
  p.validate();
  const double omega = kTwoPi * p.rabi;
  const double delta = kTwoPi * p.detuning;
  const double omega_e = std::hypot(omega, delta);
  const double c = std::cos(0.5 * omega_e * t);
  const double s = std::sin(0.5 * omega_e * t);
  const Complex i{0.0, 1.0};
  const Complex dp = p.c_p0 * (c - i * (delta / omega_e) * s) + i * (omega / omega_e) * s * p.c_m0;
  const Complex dm = p.c_m0 * (c + i * (delta / omega_e) * s) + i * (omega / omega_e) * s * p.c_p0;
  return {dp * std::polar(1.0, 0.5 * delta * t), dm * std::polar(1.0, -0.5 * delta * t)};
}

namespace detail {
inline void check_2pik_args(double delta, int k) {
  if (k < 1) throw ConfigError("2pi-k order must be >= 1");
  if (!(std::isfinite(delta)) || delta == 0.0) throw ConfigError("2pi-k detuning must be nonzero");
}
}  // namespace detail

/// Omega = |Delta| / sqrt(4k^2 - 1): a pi pulse completes k generalized Rabi cycles.
inline double rabi_2pik_pi(double delta, int k) {
  detail::check_2pik_args(delta, k);
  const double kk = static_cast<double>(k);
  return std::abs(delta) / std::sqrt(4.0 * kk * kk - 1.0);
}

/// Omega = |Delta| / sqrt(16k^2 - 1): same for a pi/2 pulse.
inline double rabi_2pik_halfpi(double delta, int k) {
  detail::check_2pik_args(delta, k);
  const double kk = static_cast<double>(k);
  return std::abs(delta) / std::sqrt(16.0 * kk * kk - 1.0);
}

enum class PulseKind { pi, half_pi };

inline double rabi_2pik(double delta, int k, PulseKind kind) {
  return kind == PulseKind::pi ? rabi_2pik_pi(delta, k) : rabi_2pik_halfpi(delta, k);
}

struct DetuningEntry {
  std::string label;
  double value;
};

/// Detunings that appear between a driven transition and its non-resonant
/// neighbours once second-neighbour coupling is included.
class DetuningCatalog {
 public:
  explicit DetuningCatalog(const ChainParams& p) {
    const double j = p.j1;
    const double jp = p.j2;
    entries_ = {
        {"2J'", 2 * jp},           {"2J", 2 * j},    {"2J-2J'", 2 * j - 2 * jp},
        {"2J+2J'", 2 * j + 2 * jp}, {"4J", 4 * j},    {"4J+2J'", 4 * j + 2 * jp},
    };
  }

  const std::vector<DetuningEntry>& entries() const { return entries_; }

  const DetuningEntry* find(const std::string& label) const {
    for (const auto& e : entries_) {
      if (e.label == label) return &e;
    }
    return nullptr;
  }

 private:
  std::vector<DetuningEntry> entries_;
};

struct RabiCandidate {
  std::string label;
  double delta;
  int k;
  double omega;
};

/// Omega^(k) for k = 1..k_max of one detuning (zero detuning gives nothing).
inline std::vector<RabiCandidate> rabi_family(const DetuningEntry& entry, int k_max, PulseKind kind) {
  std::vector<RabiCandidate> out;
  if (entry.value == 0.0) return out;
  for (int k = 1; k <= k_max; ++k) {
    out.push_back({entry.label, entry.value, k, rabi_2pik(entry.value, k, kind)});
  }
  return out;
}

struct CoincidenceCluster {
  double anchor;                       ///< Omega of the anchor-family member
  std::vector<RabiCandidate> members;  ///< anchor first, then by label order and k
};

/// Groups the pi-pulse values Omega^(k)_Delta (k <= k_max) that fall inside
/// [lo, hi]. The anchors are the members of the smallest nonzero detuning,
/// whose values are the most widely spaced; every other value within
/// relative distance `cluster_tol` of an anchor joins that anchor's cluster.
inline std::vector<CoincidenceCluster> coincidence_scan(const DetuningCatalog& catalog, int k_max,
                                                        std::pair<double, double> window,
                                                        double cluster_tol = 0.01) {
  if (k_max < 1) throw ConfigError("coincidence scan needs k_max >= 1");
  if (!(cluster_tol >= 0.0)) throw ConfigError("cluster tolerance must be >= 0");
  const auto [lo, hi] = window;
  std::vector<CoincidenceCluster> clusters;
  if (!(lo <= hi)) return clusters;

  const DetuningEntry* anchor_family = nullptr;
  for (const auto& e : catalog.entries()) {
    if (e.value > 0.0 && (anchor_family == nullptr || e.value < anchor_family->value)) {
      anchor_family = &e;
    }
  }
  if (anchor_family == nullptr) return clusters;

  auto in_window = [&](double w) { return w >= lo && w <= hi; };
  for (const auto& a : rabi_family(*anchor_family, k_max, PulseKind::pi)) {
    if (!in_window(a.omega)) continue;
    CoincidenceCluster c{a.omega, {a}};
    for (const auto& e : catalog.entries()) {
      if (&e == anchor_family || e.value <= 0.0) continue;
      for (const auto& m : rabi_family(e, k_max, PulseKind::pi)) {
        if (in_window(m.omega) && std::abs(m.omega - a.omega) <= cluster_tol * a.omega) {
          c.members.push_back(m);
        }
      }
    }
    clusters.push_back(std::move(c));
  }
  std::sort(clusters.begin(), clusters.end(),
            [](const auto& x, const auto& y) { return x.anchor < y.anchor; });
  return clusters;
}

/// Integrates one isolated pair with the full integrator (all other
/// couplings switched off). Useful for checking analytic_evolution.
inline TwoLevelAmplitudes numeric_two_level(const TwoLevelParams& p, const Transition& pair,
                                            const Spectrum& spectrum, double t,
                                            IntegratorConfig cfg = {}) {
  p.validate();
  StateVector s;
  s.amps[pair.upper.index()] = p.c_p0;
  s.amps[pair.lower.index()] = p.c_m0;
  Pulse pulse;
  pulse.rabi = p.rabi;
  pulse.angle = kTwoPi * p.rabi * t;
  pulse.carrier = pair.gap - p.detuning;
  pulse.phase = 0.0;
  const std::array pairs{std::pair{pair.lower, pair.upper}};
  cfg.couplings = couplings_for(spectrum, pairs);
  cfg.clock = PulseClock::local;
  const StateVector out = apply_pulse(s, pulse, spectrum, cfg);
  return {out.amps[pair.upper.index()], out.amps[pair.lower.index()]};
}

}  // namespace spinchain
