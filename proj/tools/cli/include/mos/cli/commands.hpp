// Copyright 2026 The mos Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MOS_CLI_COMMANDS_HPP_
#define MOS_CLI_COMMANDS_HPP_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace mos::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;    // validation criterion failed
inline constexpr int kExitBadInput = 2;   // malformed CSV/config/arguments
inline constexpr int kExitNumerical = 3;  // rank deficiency, n <= p

struct EstimateArgs {
  std::string x_path;
  std::string y_path;
  double alpha = 0.1;
  std::vector<std::string> criteria = {"rrt"};
  std::optional<std::uint64_t> seed;  // Design calibration
};

struct ThresholdsArgs {
  int n = 0;
  int p = 0;
  double alpha = 0.1;
};

struct ExperimentArgs {
  std::optional<std::string> regime;
  std::optional<std::string> config;
  std::optional<std::string> out;
  std::optional<std::string> svg;
  std::string svg_metric = "pcs";
  std::optional<int> workers;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
};

struct ValidateArgs {
  std::string level = "quick";
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
};

int cmd_estimate(const EstimateArgs& args, std::ostream& out,
                 std::ostream& err);
int cmd_thresholds(const ThresholdsArgs& args, std::ostream& out,
                   std::ostream& err);
int cmd_experiment(const ExperimentArgs& args, std::ostream& out,
                   std::ostream& err);
int cmd_validate(const ValidateArgs& args, std::ostream& out,
                 std::ostream& err);

// Seed from MOS_SEED, if set. Throws std::invalid_argument if malformed.
std::optional<std::uint64_t> env_seed();

// Full command line: `mos <command> [flags]`.
int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace mos::cli

#endif  // MOS_CLI_COMMANDS_HPP_
