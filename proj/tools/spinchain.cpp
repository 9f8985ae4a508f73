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


// spinchain: command-line front end.
//
//   spinchain <command> [--config FILE] [--out DIR] [--workers N] [--seedless]
//
// Commands: spectrum, teleport, sweep-jratio, sweep-rabi, rabi-2pik, two-level.
// Exit status: 0 success, 2 configuration or usage error, 3 numerical failure.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "spinchain/spinchain.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Four-spin Ising chain pulse simulator", "spinchain"};
  app.set_version_flag("--version", SPINCHAIN_VERSION);

  std::string command;
  std::string config_path;
  std::string out_dir;
  int workers = 1;
  bool seedless = false;
  bool quiet = false;

  std::string names;
  for (const auto& [n, _] : spinchain::kCommands) names += (names.empty() ? "" : "|") + std::string(n);
  app.add_option("command", command, names)->required();
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--out", out_dir, "output directory (default: output.dir or .)");
  app.add_option("--workers", workers, "maximum worker threads for sweeps")->check(CLI::PositiveNumber);
  app.add_flag("--seedless", seedless, "accepted for scripts; every run is deterministic");
  app.add_flag("-q,--quiet", quiet, "suppress the summary on stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : spinchain::kExitConfig;
  }

  spinchain::RunConfig config;
  try {
    if (!config_path.empty()) config = spinchain::parse_config(config_path);
  } catch (const spinchain::ConfigError& e) {
    std::cerr << "spinchain: configuration error: " << e.what() << "\n";
    return spinchain::kExitConfig;
  }

  spinchain::DispatchOptions options;
  options.out_dir = out_dir;
  options.workers = workers;
  options.log = quiet ? nullptr : &std::cout;
  const spinchain::DispatchResult result = spinchain::dispatch(command, config, options);
  if (result.exit_code != 0) {
    std::cerr << "spinchain: " << result.message << "\n";
    return result.exit_code;
  }
  if (!quiet) {
    for (const auto& a : result.artifacts) std::cout << "wrote " << a.string() << "\n";
  }
  return 0;
}
