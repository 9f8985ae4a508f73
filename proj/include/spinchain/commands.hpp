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

// Subcommands of the spinchain tool. Each one writes its CSV files and a
// manifest_<command>.json into the output directory.

#pragma once

#include <array>
#include <chrono>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "spinchain/config.hpp"
#include "spinchain/dynamics.hpp"
#include "spinchain/errors.hpp"
#include "spinchain/io.hpp"
#include "spinchain/spin_model.hpp"
#include "spinchain/sweeps.hpp"
#include "spinchain/teleport.hpp"
#include "spinchain/two_level.hpp"

namespace spinchain {

enum class Command { spectrum, teleport, sweep_jratio, sweep_rabi, rabi_2pik, two_level };

inline constexpr std::array<std::pair<std::string_view, Command>, 6> kCommands{{
    {"spectrum", Command::spectrum},
    {"teleport", Command::teleport},
    {"sweep-jratio", Command::sweep_jratio},
    {"sweep-rabi", Command::sweep_rabi},
    {"rabi-2pik", Command::rabi_2pik},
    {"two-level", Command::two_level},
}};

inline std::optional<Command> parse_command(std::string_view name) {
  for (const auto& [n, c] : kCommands) {
    if (n == name) return c;
  }
  return std::nullopt;
}

inline std::string_view to_string(Command c) {
  for (const auto& [n, cmd] : kCommands) {
    if (cmd == c) return n;
  }
  return "?";
}

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

struct DispatchOptions {
  std::filesystem::path out_dir;  ///< empty: config output.dir, then "."
  int workers = 1;
  std::ostream* log = nullptr;    ///< human-readable summary, optional
};

struct DispatchResult {
  int exit_code = kExitOk;
  std::string message;  ///< diagnostic when exit_code != 0
  std::vector<std::filesystem::path> artifacts;
};

namespace detail {

struct CommandContext {
  const RunConfig& config;
  std::filesystem::path dir;
  int workers;
  std::ostream* log;
  std::vector<std::filesystem::path> artifacts;

  std::filesystem::path file(const std::string& name) {
    artifacts.push_back(dir / name);
    return dir / name;
  }

  template <typename T>
  void say(const T& v) {
    if (log) *log << v;
  }
};

inline void run_spectrum(CommandContext& ctx) {
  const Spectrum spectrum(ctx.config.chain);
  write_spectrum_csv(ctx.file("spectrum.csv"), spectrum);
  write_transitions_csv(ctx.file("transitions.csv"), spectrum);
  std::ostringstream o;
  o << "16 levels, 32 single-flip transitions\n";
  ctx.say(o.str());
}

inline std::string fixed(double v, int digits = 6) {
  std::ostringstream o;
  o << std::fixed << std::setprecision(digits) << v;
  return o.str();
}

inline void run_teleport(CommandContext& ctx) {
  const RunConfig& c = ctx.config;
  const Spectrum spectrum(c.chain);
  const PulseProgram program = build_program(spectrum, c.rabi);
  ProgramOptions opts;
  opts.record_trajectory = true;
  opts.samples_per_pulse = c.samples_per_pulse;
  const ProgramResult run = apply_program(initial_state(c.qubit), program.pulses(), spectrum, c.integrator, opts);

  {
    CsvWriter w(ctx.file("pulses.csv"), "index,stage,lower,upper,angle,phase,carrier,rabi,duration_us");
    for (std::size_t i = 0; i < program.size(); ++i) {
      const auto& [p, stage] = program.staged()[i];
      w.row(i, to_string(stage), p.label->first.index(), p.label->second.index(), p.angle, p.phase, p.carrier,
            p.rabi, p.duration());
    }
    w.close();
  }
  write_trajectory_csv(ctx.file("trajectory.csv"), run.trajectory);

  const IdealStates ideal = ideal_states(c.qubit);
  const IdealStates targets = protocol_stage_targets(c.qubit);
  const std::array<const IdealState*, 3> stage_ref{&targets.psi1, &targets.psi2, &targets.psi3};
  const std::array<Stage, 3> stages{Stage::entangle, Stage::cnot, Stage::hadamard};
  {
    CsvWriter w(ctx.file("stages.csv"), "stage,t_us," + numbered_header("p", kNumStates) + "," +
                                             numbered_header("iz", kNumSpins) +
                                             ",target_overlap_mag");
    for (std::size_t s = 0; s < stages.size(); ++s) {
      const StateVector& st = run.after_pulse[program.stage_end(stages[s]) - 1];
      w.cell(to_string(stages[s])).cell(st.frame_time);
      for (double p : probabilities(st)) w.cell(p);
      for (double z : spin_expectations(st)) w.cell(z);
      w.cell(fidelity(st, *stage_ref[s]).magnitude);
      w.end();
    }
    w.close();
  }

  const Fidelity f = fidelity(run.final_state, protocol_target(c.qubit));
  const Fidelity f_literal = fidelity(run.final_state, ideal.psi3);
  {
    CsvWriter w(ctx.file("fidelity.csv"), "reference,overlap_re,overlap_im,magnitude,squared");
    w.row("protocol_target", f.overlap.real(), f.overlap.imag(), f.magnitude, f.squared);
    w.row("psi3", f_literal.overlap.real(), f_literal.overlap.imag(), f_literal.magnitude, f_literal.squared);
    w.close();
  }

  std::ostringstream o;
  o << "pulse  stage     pair     angle/pi  phase/pi  carrier        duration_us\n";
  for (std::size_t i = 0; i < program.size(); ++i) {
    const auto& [p, stage] = program.staged()[i];
    o << "  " << i << "    " << std::left << std::setw(9) << to_string(stage) << " (" << std::right
      << std::setw(2) << p.label->first.index() << "," << std::setw(2) << p.label->second.index() << ")  "
      << std::setw(8) << fixed(p.angle / kPi, 3) << "  " << std::setw(8) << fixed(p.phase / kPi, 3) << "  "
      << std::setw(12) << fixed(p.carrier, 6) << "  " << fixed(p.duration(), 4) << "\n";
  }
  o << "\nfinal probabilities\n";
  const Probabilities probs = probabilities(run.final_state);
  for (int m = 0; m < kNumStates; ++m) {
    o << "  |" << BasisState(m).bits() << ">  " << fixed(probs[m], 8) << "\n";
  }
  const SpinExpectations iz = spin_expectations(run.final_state);
  o << "\n<I_z>  ";
  for (int k = kNumSpins - 1; k >= 0; --k) o << " spin" << k << "=" << fixed(iz[k], 6);
  o << "\nnorm - 1  " << std::scientific << std::setprecision(3) << run.final_state.norm_squared() - 1.0 << "\n";
  o << "fidelity  <target|psi> = " << fixed(f.overlap.real(), 9) << (f.overlap.imag() < 0 ? " - " : " + ")
    << fixed(std::abs(f.overlap.imag()), 9) << "i   |F| = " << fixed(f.magnitude, 9)
    << "   |F|^2 = " << fixed(f.squared, 9) << "\n";
  o << "          |<psi3|psi>| = " << fixed(f_literal.magnitude, 9) << "\n";
  {
    std::ofstream rep(ctx.file("report.txt"));
    rep << o.str();
    if (!rep) throw IoError("error writing report.txt");
  }
  ctx.say(o.str());
}

inline void run_sweep_command(CommandContext& ctx, SweepControl control) {
  const RunConfig& c = ctx.config;
  SweepSettings s = c.sweep ? *c.sweep
                            : (control == SweepControl::j_ratio ? SweepSettings::j_ratio_defaults()
                                                                : SweepSettings::rabi_defaults());
  if (s.control != control) {
    throw ConfigError("sweep.control = " + std::string(to_string(s.control)) + " does not match this subcommand");
  }
  SweepSpec spec;
  spec.control = control;
  spec.grid = s.grid();
  spec.base = c.chain;
  spec.qubit = c.qubit;
  spec.rabi = c.rabi;
  spec.integrator = c.integrator;
  spec.workers = ctx.workers;
  const SweepResult result = run_sweep(spec);

  const std::string stem = control == SweepControl::j_ratio ? "sweep_jratio" : "sweep_rabi";
  write_sweep_csv(ctx.file(stem + ".csv"), result);

  std::size_t failed = 0;
  for (const auto& row : result.rows) failed += row.ok ? 0 : 1;

  std::ostringstream o;
  o << stem << ": " << result.rows.size() << " points, " << failed << " failed\n";
  CsvWriter w(ctx.file(stem + "_features.csv"), "feature,control,value,prominence");
  const auto threshold = find_threshold(result, s.level);
  if (threshold) {
    w.row("plateau", std::nan(""), threshold->plateau, std::nan(""));
    w.row("threshold", threshold->control, threshold->cutoff, std::nan(""));
    o << "plateau |F| = " << fixed(threshold->plateau, 6) << ", threshold (level " << s.level
      << ") at control = " << threshold->control << "\n";
  } else {
    o << "no threshold found\n";
  }
  for (const auto& p : find_peaks(result, s.prominence)) {
    w.row("peak", p.control, p.value, p.prominence);
    o << "peak at control = " << fixed(p.control, 6) << "  |F| = " << fixed(p.value, 6) << "\n";
  }
  w.close();
  for (const auto& row : result.rows) {
    if (!row.ok) o << "failed at control = " << row.control << ": " << row.error << "\n";
  }
  ctx.say(o.str());
  if (failed == result.rows.size()) throw NumericalError("every sweep point failed");
}

inline void run_rabi_2pik(CommandContext& ctx) {
  const Rabi2pikSettings& s = ctx.config.rabi2pik;
  const DetuningCatalog catalog(ctx.config.chain);
  write_rabi_2pik_csv(ctx.file("rabi_2pik.csv"), catalog, s.k_max);
  const auto clusters = coincidence_scan(catalog, s.k_max, {s.window_lo, s.window_hi}, s.cluster_tol);
  write_coincidences_csv(ctx.file("coincidences.csv"), clusters);
  std::ostringstream o;
  for (const auto& cl : clusters) {
    o << "Omega = " << fixed(cl.anchor, 6) << ":";
    for (const auto& m : cl.members) o << "  " << m.label << "/k=" << m.k << " " << fixed(m.omega, 6);
    o << "\n";
  }
  ctx.say(o.str());
}

inline void run_two_level(CommandContext& ctx) {
  const TwoLevelSettings& s = ctx.config.two_level;
  const TwoLevelParams p = s.params();
  const double tau = s.duration > 0.0 ? s.duration : 1.0 / (2.0 * s.rabi);
  CsvWriter w(ctx.file("two_level.csv"), "t_us,dp_re,dp_im,dm_re,dm_im,pop_p,pop_m");
  for (int i = 0; i < s.samples; ++i) {
    const double t = tau * i / (s.samples - 1);
    const TwoLevelAmplitudes a = analytic_evolution(p, t);
    w.row(t, a.d_p.real(), a.d_p.imag(), a.d_m.real(), a.d_m.imag(), std::norm(a.d_p), std::norm(a.d_m));
  }
  w.close();
  const TwoLevelAmplitudes end = analytic_evolution(p, tau);
  ctx.say("tau = " + fixed(tau, 6) + " us, |D_p|^2 = " + fixed(std::norm(end.d_p), 9) +
          ", |D_m|^2 = " + fixed(std::norm(end.d_m), 9) + "\n");
}

}  // namespace detail

/// Runs one subcommand. Never throws: failures map to exit codes
/// 2 (configuration), 3 (numerical) or 1 (file output).
inline DispatchResult dispatch(std::string_view command, const RunConfig& config,
                               const DispatchOptions& options = {}) {
  DispatchResult result;
  const auto cmd = parse_command(command);
  if (!cmd) {
    std::string names;
    for (const auto& [n, _] : kCommands) names += (names.empty() ? "" : ", ") + std::string(n);
    result.exit_code = kExitConfig;
    result.message = "unknown subcommand '" + std::string(command) + "' (expected one of " + names + ")";
    return result;
  }
  const auto start = std::chrono::steady_clock::now();
  try {
    config.validate();
    if (options.workers < 1) throw ConfigError("--workers must be >= 1");
    std::filesystem::path dir = options.out_dir;
    if (dir.empty()) dir = config.output_dir.empty() ? "." : config.output_dir;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());

    detail::CommandContext ctx{config, dir, options.workers, options.log, {}};
    switch (*cmd) {
      case Command::spectrum: detail::run_spectrum(ctx); break;
      case Command::teleport: detail::run_teleport(ctx); break;
      case Command::sweep_jratio: detail::run_sweep_command(ctx, SweepControl::j_ratio); break;
      case Command::sweep_rabi: detail::run_sweep_command(ctx, SweepControl::rabi); break;
      case Command::rabi_2pik: detail::run_rabi_2pik(ctx); break;
      case Command::two_level: detail::run_two_level(ctx); break;
    }

    Manifest m;
    m.command = std::string(command);
    m.config_text = serialize_config(config);
    m.workers = options.workers;
    m.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (const auto& a : ctx.artifacts) m.outputs.push_back(a.filename().string());
    const auto manifest_path = dir / ("manifest_" + std::string(command) + ".json");
    write_manifest(manifest_path, m);
    result.artifacts = std::move(ctx.artifacts);
    result.artifacts.push_back(manifest_path);
  } catch (const ConfigError& e) {
    result.exit_code = kExitConfig;
    result.message = std::string("configuration error: ") + e.what();
  } catch (const NumericalError& e) {
    result.exit_code = kExitNumerical;
    result.message = std::string("numerical failure: ") + e.what();
  } catch (const IoError& e) {
    result.exit_code = kExitIo;
    result.message = std::string("output error: ") + e.what();
  } catch (const std::exception& e) {
    result.exit_code = kExitNumerical;
    result.message = std::string("error: ") + e.what();
  }
  return result;
}

}  // namespace spinchain
