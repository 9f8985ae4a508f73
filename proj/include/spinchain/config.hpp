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

// Run configuration: a flat `key = value` file with dotted keys.
//
//   # comment
//   chain.omega0 = 100
//   chain.j2 = 0.4
//   qubit.c0 = 0.6
//   qubit.c1 = 0.8
//
// Every key is optional; missing keys take the reference defaults. Unknown
// keys, repeated keys and malformed values are rejected with the key name
// and line number.

#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "spinchain/dynamics.hpp"
#include "spinchain/errors.hpp"
#include "spinchain/spin_model.hpp"
#include "spinchain/sweeps.hpp"
#include "spinchain/teleport.hpp"
#include "spinchain/two_level.hpp"

namespace spinchain {

enum class GridSpacing { linear, log };

struct SweepSettings {
  SweepControl control = SweepControl::j_ratio;
  double start = 0.002;
  double stop = 0.2;
  int points = 60;
  GridSpacing spacing = GridSpacing::log;
  double level = 0.98;        ///< threshold level, fraction of plateau
  double prominence = 1e-3;   ///< peak prominence, absolute fidelity

  static SweepSettings j_ratio_defaults() { return {}; }
  static SweepSettings rabi_defaults() {
    return {SweepControl::rabi, 0.04, 0.12, 240, GridSpacing::linear, 0.98, 1e-3};
  }

  std::vector<double> grid() const {
    return spacing == GridSpacing::log ? log_grid(start, stop, points)
                                       : linear_grid(start, stop, points);
  }

  void validate() const {
    if (points < 1) throw ConfigError("sweep.points must be >= 1");
    if (!std::isfinite(start) || !std::isfinite(stop)) throw ConfigError("sweep.start/stop must be finite");
    if (points > 1 && !(stop > start)) throw ConfigError("sweep.stop must exceed sweep.start");
    if (spacing == GridSpacing::log && !(start > 0.0)) {
      throw ConfigError("sweep.start must be > 0 for log spacing");
    }
    if (!(level > 0.0 && level <= 1.0)) throw ConfigError("sweep.level must be in (0, 1]");
    if (!(prominence >= 0.0)) throw ConfigError("sweep.prominence must be >= 0");
  }

  bool operator==(const SweepSettings&) const = default;
};

struct TwoLevelSettings {
  double rabi = 0.1;
  double delta = 0.8;
  Complex c_p0{0.0, 0.0};
  Complex c_m0{1.0, 0.0};
  double duration = 0.0;  ///< microseconds; 0 means one pi pulse
  int samples = 2000;

  TwoLevelParams params() const { return {rabi, delta, c_p0, c_m0}; }

  void validate() const {
    params().validate();
    if (!(duration >= 0.0) || !std::isfinite(duration)) throw ConfigError("two_level.duration must be >= 0");
    if (samples < 2) throw ConfigError("two_level.samples must be >= 2");
  }

  bool operator==(const TwoLevelSettings&) const = default;
};

struct Rabi2pikSettings {
  int k_max = 500;
  double window_lo = 0.04;
  double window_hi = 0.12;
  double cluster_tol = 0.01;

  void validate() const {
    if (k_max < 1) throw ConfigError("rabi2pik.k_max must be >= 1");
    if (!(window_lo >= 0.0 && window_hi >= window_lo)) {
      throw ConfigError("rabi2pik.window_lo/window_hi must satisfy 0 <= lo <= hi");
    }
    if (!(cluster_tol >= 0.0)) throw ConfigError("rabi2pik.cluster_tol must be >= 0");
  }

  bool operator==(const Rabi2pikSettings&) const = default;
};

struct RunConfig {
  ChainParams chain;
  InputQubit qubit;
  double rabi = 0.1;
  IntegratorConfig integrator;
  int samples_per_pulse = 2000;
  std::optional<SweepSettings> sweep;
  TwoLevelSettings two_level;
  Rabi2pikSettings rabi2pik;
  std::string output_dir;

  void validate() const {
    chain.validate();
    qubit.validate();
    if (!std::isfinite(rabi) || rabi <= 0.0) throw ConfigError("pulse.rabi must be finite and > 0");
    integrator.validate();
    if (samples_per_pulse < 1) throw ConfigError("integrator.samples_per_pulse must be >= 1");
    if (sweep) sweep->validate();
    two_level.validate();
    rabi2pik.validate();
  }

  bool operator==(const RunConfig&) const = default;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

struct ConfigReader {
  std::map<std::string, std::pair<std::string, int>> values;  // key -> (value, line)
  std::map<std::string, bool> used;

  std::optional<std::string> take(const std::string& key) {
    auto it = values.find(key);
    if (it == values.end()) return std::nullopt;
    used[key] = true;
    return it->second.first;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& why) const {
    auto it = values.find(key);
    const std::string where = it == values.end() ? "" : " (line " + std::to_string(it->second.second) + ")";
    throw ConfigError(key + where + ": " + why);
  }

  void number(const std::string& key, double& out) {
    if (auto v = take(key)) {
      double x = 0.0;
      const auto res = std::from_chars(v->data(), v->data() + v->size(), x);
      if (res.ec != std::errc{} || res.ptr != v->data() + v->size()) fail(key, "expected a number, got '" + *v + "'");
      out = x;
    }
  }

  template <typename Int>
  void integer(const std::string& key, Int& out) {
    if (auto v = take(key)) {
      long long x = 0;
      const auto res = std::from_chars(v->data(), v->data() + v->size(), x);
      if (res.ec != std::errc{} || res.ptr != v->data() + v->size()) fail(key, "expected an integer, got '" + *v + "'");
      out = static_cast<Int>(x);
    }
  }

  template <typename Enum>
  void choice(const std::string& key, Enum& out, std::initializer_list<std::pair<std::string_view, Enum>> opts) {
    if (auto v = take(key)) {
      for (const auto& [name, e] : opts) {
        if (*v == name) {
          out = e;
          return;
        }
      }
      std::string allowed;
      for (const auto& o : opts) allowed += (allowed.empty() ? "" : "|") + std::string(o.first);
      fail(key, "expected one of " + allowed + ", got '" + *v + "'");
    }
  }

  void complex(const std::string& key, Complex& out) {
    double re = out.real();
    double im = out.imag();
    number(key, re);
    number(key + "_im", im);
    out = {re, im};
  }
};

}  // namespace detail

/// Parses config text. Throws ConfigError on any problem.
inline RunConfig parse_config_text(std::string_view text) {
  detail::ConfigReader r;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string value(detail::trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (!r.values.emplace(key, std::pair{value, line_no}).second) {
      throw ConfigError(key + " (line " + std::to_string(line_no) + "): duplicate key");
    }
  }

  RunConfig c;
  for (int k = 0; k < kNumSpins; ++k) r.number("chain.omega" + std::to_string(k), c.chain.omega[k]);
  r.number("chain.j1", c.chain.j1);
  r.number("chain.j2", c.chain.j2);
  r.complex("qubit.c0", c.qubit.c0);
  r.complex("qubit.c1", c.qubit.c1);
  r.number("pulse.rabi", c.rabi);

  r.number("integrator.max_phase_step", c.integrator.max_phase_step);
  if (r.values.count("integrator.hard_step")) {
    double h = 0.0;
    r.number("integrator.hard_step", h);
    c.integrator.hard_step = h;
  }
  r.integer("integrator.max_steps", c.integrator.max_steps);
  r.choice("integrator.clock", c.integrator.clock,
           {{"local", PulseClock::local}, {"global", PulseClock::global}});
  r.integer("integrator.samples_per_pulse", c.samples_per_pulse);

  bool any_sweep = false;
  for (const auto& [key, _] : r.values) any_sweep |= key.rfind("sweep.", 0) == 0;
  if (any_sweep) {
    SweepControl control = SweepControl::j_ratio;
    r.choice("sweep.control", control, {{"j_ratio", SweepControl::j_ratio}, {"rabi", SweepControl::rabi}});
    SweepSettings s = control == SweepControl::rabi ? SweepSettings::rabi_defaults()
                                                    : SweepSettings::j_ratio_defaults();
    r.number("sweep.start", s.start);
    r.number("sweep.stop", s.stop);
    r.integer("sweep.points", s.points);
    r.choice("sweep.spacing", s.spacing, {{"linear", GridSpacing::linear}, {"log", GridSpacing::log}});
    r.number("sweep.level", s.level);
    r.number("sweep.prominence", s.prominence);
    c.sweep = s;
  }

  r.number("two_level.rabi", c.two_level.rabi);
  r.number("two_level.delta", c.two_level.delta);
  r.complex("two_level.cp0", c.two_level.c_p0);
  r.complex("two_level.cm0", c.two_level.c_m0);
  r.number("two_level.duration", c.two_level.duration);
  r.integer("two_level.samples", c.two_level.samples);

  r.integer("rabi2pik.k_max", c.rabi2pik.k_max);
  r.number("rabi2pik.window_lo", c.rabi2pik.window_lo);
  r.number("rabi2pik.window_hi", c.rabi2pik.window_hi);
  r.number("rabi2pik.cluster_tol", c.rabi2pik.cluster_tol);

  if (auto v = r.take("output.dir")) c.output_dir = *v;

  for (const auto& [key, value] : r.values) {
    if (!r.used.count(key)) r.fail(key, "unknown key");
  }
  c.validate();
  return c;
}

inline RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str());
}

/// Writes every field; parse_config_text(serialize_config(c)) == c.
inline std::string serialize_config(const RunConfig& c) {
  std::ostringstream o;
  auto put = [&](const std::string& key, double v) { o << key << " = " << detail::format_double(v) << '\n'; };
  auto put_int = [&](const std::string& key, long long v) { o << key << " = " << v << '\n'; };
  auto put_str = [&](const std::string& key, std::string_view v) { o << key << " = " << v << '\n'; };
  auto put_complex = [&](const std::string& key, Complex v) {
    put(key, v.real());
    put(key + "_im", v.imag());
  };

  for (int k = 0; k < kNumSpins; ++k) put("chain.omega" + std::to_string(k), c.chain.omega[k]);
  put("chain.j1", c.chain.j1);
  put("chain.j2", c.chain.j2);
  put_complex("qubit.c0", c.qubit.c0);
  put_complex("qubit.c1", c.qubit.c1);
  put("pulse.rabi", c.rabi);
  put("integrator.max_phase_step", c.integrator.max_phase_step);
  if (c.integrator.hard_step) put("integrator.hard_step", *c.integrator.hard_step);
  put_int("integrator.max_steps", c.integrator.max_steps);
  put_str("integrator.clock", c.integrator.clock == PulseClock::local ? "local" : "global");
  put_int("integrator.samples_per_pulse", c.samples_per_pulse);
  if (c.sweep) {
    put_str("sweep.control", to_string(c.sweep->control));
    put("sweep.start", c.sweep->start);
    put("sweep.stop", c.sweep->stop);
    put_int("sweep.points", c.sweep->points);
    put_str("sweep.spacing", c.sweep->spacing == GridSpacing::log ? "log" : "linear");
    put("sweep.level", c.sweep->level);
    put("sweep.prominence", c.sweep->prominence);
  }
  put("two_level.rabi", c.two_level.rabi);
  put("two_level.delta", c.two_level.delta);
  put_complex("two_level.cp0", c.two_level.c_p0);
  put_complex("two_level.cm0", c.two_level.c_m0);
  put("two_level.duration", c.two_level.duration);
  put_int("two_level.samples", c.two_level.samples);
  put_int("rabi2pik.k_max", c.rabi2pik.k_max);
  put("rabi2pik.window_lo", c.rabi2pik.window_lo);
  put("rabi2pik.window_hi", c.rabi2pik.window_hi);
  put("rabi2pik.cluster_tol", c.rabi2pik.cluster_tol);
  if (!c.output_dir.empty()) put_str("output.dir", c.output_dir);
  return o.str();
}

}  // namespace spinchain
