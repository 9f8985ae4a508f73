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

// Fidelity sweeps of the full teleportation protocol over J'/J or Omega,
// plus threshold and peak detection on the resulting curves.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "spinchain/dynamics.hpp"
#include "spinchain/errors.hpp"
#include "spinchain/spin_model.hpp"
#include "spinchain/teleport.hpp"

namespace spinchain {

enum class SweepControl { j_ratio, rabi };

inline std::string_view to_string(SweepControl c) {
  return c == SweepControl::j_ratio ? "j_ratio" : "rabi";
}

struct SweepSpec {
  SweepControl control = SweepControl::j_ratio;
  std::vector<double> grid;
  ChainParams base;
  InputQubit qubit;
  double rabi = 0.1;  ///< used by the J'/J sweep
  IntegratorConfig integrator;
  int workers = 1;

  void validate() const {
    if (grid.empty()) throw ConfigError("sweep grid must not be empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!std::isfinite(grid[i])) throw ConfigError("sweep grid values must be finite");
      if (i > 0 && !(grid[i] > grid[i - 1])) {
        throw ConfigError("sweep grid must be strictly increasing");
      }
    }
    if (control == SweepControl::j_ratio && grid.front() < 0.0) {
      throw ConfigError("J'/J grid values must be >= 0");
    }
    if (control == SweepControl::rabi && grid.front() <= 0.0) {
      throw ConfigError("Rabi grid values must be > 0");
    }
    if (workers < 1) throw ConfigError("workers must be >= 1");
    base.validate();
    qubit.validate();
    integrator.validate();
  }
};

struct SweepRow {
  double control = 0.0;
  Fidelity fidelity;
  Probabilities probs{};
  bool ok = true;
  std::string error;  ///< set when ok == false; numeric fields are NaN
};

struct SweepResult {
  SweepControl control = SweepControl::j_ratio;
  std::vector<SweepRow> rows;
};

inline std::vector<double> linear_grid(double lo, double hi, int n) {
  if (n < 1) throw ConfigError("grid needs at least one point");
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return g;
}

inline std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0.0 && hi > 0.0)) throw ConfigError("log grid bounds must be > 0");
  std::vector<double> g = linear_grid(std::log(lo), std::log(hi), n);
  for (auto& v : g) v = std::exp(v);
  if (n > 1) {
    g.front() = lo;
    g.back() = hi;
  }
  return g;
}

/// Runs `fn(i)` for i in [0, n) on up to `workers` threads. Each index is
/// evaluated exactly once and writes only its own slot, so results do not
/// depend on the worker count.
template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  const std::size_t threads = std::min<std::size_t>(std::max(1, workers), n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
}

inline SweepRow failed_row(double control, std::string error) {
  const double nan = std::nan("");
  SweepRow row;
  row.control = control;
  row.ok = false;
  row.error = std::move(error);
  row.fidelity = {{nan, nan}, nan, nan};
  row.probs.fill(nan);
  return row;
}

/// One full protocol run; the reference state is protocol_target(qubit).
inline SweepRow run_protocol_point(double control, const Spectrum& dynamics_spectrum,
                                   const Spectrum& carrier_spectrum, double rabi,
                                   const InputQubit& qubit, const IntegratorConfig& cfg) {
  try {
    const PulseProgram program = build_program(carrier_spectrum, rabi);
    const ProgramResult run =
        apply_program(initial_state(qubit), program.pulses(), dynamics_spectrum, cfg);
    SweepRow row;
    row.control = control;
    row.fidelity = fidelity(run.final_state, protocol_target(qubit));
    row.probs = probabilities(run.final_state);
    return row;
  } catch (const std::exception& e) {
    return failed_row(control, e.what());
  }
}

/// J' = ratio * J at every grid point; carriers follow the shifted spectrum.
inline SweepResult sweep_j_ratio(const SweepSpec& spec) {
  if (spec.control != SweepControl::j_ratio) throw ConfigError("sweep_j_ratio needs control j_ratio");
  spec.validate();
  SweepResult result{SweepControl::j_ratio, std::vector<SweepRow>(spec.grid.size())};
  parallel_for(spec.grid.size(), spec.workers, [&](std::size_t i) {
    ChainParams p = spec.base;
    p.j2 = spec.grid[i] * p.j1;
    try {
      const Spectrum spectrum(p);
      result.rows[i] =
          run_protocol_point(spec.grid[i], spectrum, spectrum, spec.rabi, spec.qubit, spec.integrator);
    } catch (const std::exception& e) {
      result.rows[i] = failed_row(spec.grid[i], e.what());
    }
  });
  return result;
}

/// Every pulse uses the swept Omega; carriers stay at the base spectrum.
inline SweepResult sweep_rabi(const SweepSpec& spec) {
  if (spec.control != SweepControl::rabi) throw ConfigError("sweep_rabi needs control rabi");
  spec.validate();
  const Spectrum spectrum(spec.base);
  SweepResult result{SweepControl::rabi, std::vector<SweepRow>(spec.grid.size())};
  parallel_for(spec.grid.size(), spec.workers, [&](std::size_t i) {
    result.rows[i] =
        run_protocol_point(spec.grid[i], spectrum, spectrum, spec.grid[i], spec.qubit, spec.integrator);
  });
  return result;
}

inline SweepResult run_sweep(const SweepSpec& spec) {
  return spec.control == SweepControl::j_ratio ? sweep_j_ratio(spec) : sweep_rabi(spec);
}

enum class FidelityReduction { magnitude, squared, real };

inline double reduce(const Fidelity& f, FidelityReduction r) {
  switch (r) {
    case FidelityReduction::magnitude: return f.magnitude;
    case FidelityReduction::squared: return f.squared;
    case FidelityReduction::real: return f.overlap.real();
  }
  return f.magnitude;
}

/// Per-row values; failed rows become NaN.
inline std::vector<double> fidelity_curve(const SweepResult& r,
                                          FidelityReduction reduction = FidelityReduction::magnitude) {
  std::vector<double> v;
  v.reserve(r.rows.size());
  for (const auto& row : r.rows) v.push_back(row.ok ? reduce(row.fidelity, reduction) : std::nan(""));
  return v;
}

/// Median of the top decile (at least one value) of the finite values.
inline double plateau(const std::vector<double>& values) {
  std::vector<double> v;
  for (double x : values) {
    if (std::isfinite(x)) v.push_back(x);
  }
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end(), std::greater<>());
  const std::size_t top = std::max<std::size_t>(1, (v.size() + 9) / 10);
  return top % 2 == 1 ? v[top / 2] : 0.5 * (v[top / 2 - 1] + v[top / 2]);
}

struct Threshold {
  double control;
  double plateau;
  double cutoff;  ///< level * plateau
};

/// Smallest grid value from which every later point reaches level * plateau.
/// On a monotone curve this is the first crossing; on an oscillating curve
/// an isolated early maximum does not count. std::nullopt when the last
/// point itself is below the cutoff.
inline std::optional<Threshold> find_threshold(const SweepResult& r, double level = 0.98,
                                               FidelityReduction reduction = FidelityReduction::magnitude) {
  const std::vector<double> f = fidelity_curve(r, reduction);
  if (f.empty()) return std::nullopt;
  const double plat = plateau(f);
  if (!std::isfinite(plat)) return std::nullopt;
  const double cutoff = level * plat;
  std::size_t first_ok = f.size();
  for (std::size_t i = f.size(); i-- > 0;) {
    if (!(f[i] >= cutoff)) break;
    first_ok = i;
  }
  if (first_ok == f.size()) return std::nullopt;
  return Threshold{r.rows[first_ok].control, plat, cutoff};
}

struct Peak {
  std::size_t index;
  double control;
  double value;
  double prominence;
};

/// Interior local maxima whose topographic prominence (height above the
/// higher of the two lowest points separating it from higher ground)
/// is at least `prominence`.
inline std::vector<Peak> find_peaks(const std::vector<double>& controls, const std::vector<double>& f,
                                    double prominence) {
  std::vector<Peak> peaks;
  const std::size_t n = f.size();
  std::size_t i = 1;
  while (i + 1 < n) {
    if (!(f[i] > f[i - 1])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && f[j + 1] == f[i]) ++j;  // flat top
    if (j + 1 >= n || !(f[j + 1] < f[i])) {
      i = j + 1;
      continue;
    }
    const double h = f[i];
    double left_min = h;
    for (std::size_t a = i; a-- > 0;) {
      if (f[a] > h) break;
      left_min = std::min(left_min, f[a]);
    }
    double right_min = h;
    for (std::size_t b = j + 1; b < n; ++b) {
      if (f[b] > h) break;
      right_min = std::min(right_min, f[b]);
    }
    const double prom = h - std::max(left_min, right_min);
    if (prom >= prominence) peaks.push_back({i, controls[i], h, prom});
    i = j + 1;
  }
  return peaks;
}

inline std::vector<Peak> find_peaks(const SweepResult& r, double prominence,
                                    FidelityReduction reduction = FidelityReduction::magnitude) {
  std::vector<double> controls;
  for (const auto& row : r.rows) controls.push_back(row.control);
  return find_peaks(controls, fidelity_curve(r, reduction), prominence);
}

}  // namespace spinchain
