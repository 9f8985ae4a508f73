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

// Plain CSV output (one header line, shortest round-trip numbers) and the
// JSON run manifest.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "spinchain/config.hpp"
#include "spinchain/dynamics.hpp"
#include "spinchain/spin_model.hpp"
#include "spinchain/sweeps.hpp"
#include "spinchain/teleport.hpp"
#include "spinchain/two_level.hpp"

namespace spinchain {

/// Raised for unwritable output paths.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::string_view header) : path_(path), out_(path) {
    if (!out_) throw IoError("cannot open '" + path.string() + "' for writing");
    out_ << header << '\n';
  }

  template <typename... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ","), put(cells), first = false), ...);
    out_ << '\n';
  }

  /// Appends cells without ending the line; finish with end().
  template <typename T>
  CsvWriter& cell(const T& v) {
    out_ << (open_ ? "," : "");
    put(v);
    open_ = true;
    return *this;
  }

  void end() {
    out_ << '\n';
    open_ = false;
  }

  void close() {
    out_.close();
    if (!out_) throw IoError("error writing '" + path_.string() + "'");
  }

  ~CsvWriter() = default;

 private:
  void put(double v) { out_ << detail::format_double(v); }
  void put(int v) { out_ << v; }
  void put(std::int64_t v) { out_ << v; }
  void put(std::size_t v) { out_ << v; }
  void put(std::string_view v) { out_ << v; }
  void put(const std::string& v) { out_ << v; }
  void put(const char* v) { out_ << v; }

  std::filesystem::path path_;
  std::ofstream out_;
  bool open_ = false;
};

inline std::string numbered_header(std::string_view prefix, int n) {
  std::string h;
  for (int i = 0; i < n; ++i) h += (i ? "," : "") + std::string(prefix) + std::to_string(i);
  return h;
}

inline void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spectrum) {
  CsvWriter w(path, "state_index,bits,energy");
  for (int m = 0; m < kNumStates; ++m) w.row(m, BasisState(m).bits(), spectrum.energy(BasisState(m)));
  w.close();
}

inline void write_transitions_csv(const std::filesystem::path& path, const Spectrum& spectrum) {
  CsvWriter w(path, "lower,upper,spin,frequency");
  for (const auto& t : spectrum.transitions()) w.row(t.lower.index(), t.upper.index(), t.spin, t.gap);
  w.close();
}

inline void write_trajectory_csv(const std::filesystem::path& path,
                                 const std::vector<TrajectorySample>& samples) {
  CsvWriter w(path, "t_us," + numbered_header("p", kNumStates) + "," + numbered_header("iz", kNumSpins));
  for (const auto& s : samples) {
    w.cell(s.t_us);
    for (double p : s.probs) w.cell(p);
    for (double z : s.iz) w.cell(z);
    w.end();
  }
  w.close();
}

inline void write_sweep_csv(const std::filesystem::path& path, const SweepResult& result) {
  CsvWriter w(path, "control,fidelity_mag,fidelity_re,fidelity_im," + numbered_header("p", kNumStates));
  for (const auto& row : result.rows) {
    w.cell(row.control).cell(row.fidelity.magnitude).cell(row.fidelity.overlap.real()).cell(
        row.fidelity.overlap.imag());
    for (double p : row.probs) w.cell(p);
    w.end();
  }
  w.close();
}

inline void write_rabi_2pik_csv(const std::filesystem::path& path, const DetuningCatalog& catalog,
                                int k_max) {
  CsvWriter w(path, "delta_label,delta,k,kind,omega");
  for (const auto& e : catalog.entries()) {
    for (PulseKind kind : {PulseKind::pi, PulseKind::half_pi}) {
      for (const auto& c : rabi_family(e, k_max, kind)) {
        w.row(c.label, c.delta, c.k, kind == PulseKind::pi ? "pi" : "pi2", c.omega);
      }
    }
  }
  w.close();
}

inline void write_coincidences_csv(const std::filesystem::path& path,
                                   const std::vector<CoincidenceCluster>& clusters) {
  CsvWriter w(path, "cluster,anchor,delta_label,delta,k,omega,rel_offset");
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    for (const auto& m : clusters[i].members) {
      w.row(i, clusters[i].anchor, m.label, m.delta, m.k, m.omega,
            (m.omega - clusters[i].anchor) / clusters[i].anchor);
    }
  }
  w.close();
}

/// FNV-1a, 64 bit.
inline std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  std::ostringstream o;
  o << std::hex;
  o.width(16);
  o.fill('0');
  o << v;
  return o.str();
}

#ifndef SPINCHAIN_VERSION
#define SPINCHAIN_VERSION "0.0.0"
#endif

struct Manifest {
  std::string command;
  std::string config_text;  ///< serialize_config() output
  int workers = 1;
  double wall_time_s = 0.0;
  std::vector<std::string> outputs;  ///< file names relative to the manifest

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["tool"] = "spinchain";
    j["version"] = SPINCHAIN_VERSION;
#ifdef __VERSION__
    j["compiler"] = __VERSION__;
#endif
    j["command"] = command;
    j["config_hash"] = "fnv1a64:" + hex64(fnv1a64(config_text));
    j["config"] = config_text;
    j["workers"] = workers;
    j["deterministic"] = true;
    j["wall_time_s"] = wall_time_s;
    j["outputs"] = outputs;
    return j;
  }
};

inline void write_manifest(const std::filesystem::path& path, const Manifest& m) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << m.to_json().dump(2) << '\n';
  if (!out) throw IoError("error writing '" + path.string() + "'");
}

/// Recovers the configuration recorded in a manifest file.
inline RunConfig config_from_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open manifest '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
    return parse_config_text(j.at("config").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed manifest '" + path.string() + "': " + e.what());
  }
}

}  // namespace spinchain
