// Copyright 2026 The fedauc Authors
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
//
// Configuration-driven experiment runner. Four subcommands (gen, run,
// predict, attack) emit tidy CSV; identical flags and seed reproduce output
// files byte for byte.

#ifndef FEDAUC_CLI_HPP
#define FEDAUC_CLI_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace fedauc {
namespace cli {

struct GenOptions {
  std::size_t m = 10000;
  double base_rate = 0.5;
  double separation = 1.0;
  std::string family = "logit";  // "logit" or "beta"
  std::uint64_t seed = 1;
  std::string out = "dataset.csv";
};

struct RunOptions {
  std::string data;  // dataset CSV; empty selects the synthetic source below
  std::size_t synth_m = 10000;
  double synth_base_rate = 0.5;
  double synth_separation = 1.0;
  std::string synth_family = "logit";

  // Sweep axes; the grid is their cross product, restricted per protocol
  // (grid sizes apply to threshold protocols, alpha to rank-laplace).
  std::vector<std::string> protocols = {"threshold-laplace"};
  std::vector<double> eps = {1.0};
  std::vector<std::size_t> clients = {10};
  std::vector<std::size_t> grid_sizes = {100};
  std::vector<double> alphas = {0.5};
  std::vector<std::string> partitions = {"iid"};

  std::size_t trials = 100;
  std::uint64_t seed = 1;
  std::string out = "results.csv";
  std::size_t workers = 1;
  bool no_noise = false;
  double gaussian_delta = 1e-6;
};

struct PredictOptions {
  std::size_t trials = 10000;
  std::uint64_t seed = 1;
  std::string out = "predictions.csv";
};

struct AttackOptions {
  std::string data;
  std::vector<std::size_t> k = {1, 10, 100};
  std::size_t bins = 20;
  std::string out = "attack.csv";
  std::string density_out;  // empty derives <out stem>.density.csv
};

// Each command returns a process exit code: 0 success, 1 validation error,
// 2 runtime failure (no trial anywhere succeeded).
int cmd_gen(const GenOptions& options);
int cmd_run(const RunOptions& options);
int cmd_predict(const PredictOptions& options);
int cmd_attack(const AttackOptions& options);

// Full argument parser over the four subcommands, with a --config file
// (INI-style sections per subcommand) whose values lose to explicit flags.
int run_cli(int argc, const char* const* argv);

}  // namespace cli
}  // namespace fedauc

#endif  // FEDAUC_CLI_HPP
