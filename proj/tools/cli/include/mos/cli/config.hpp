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

#ifndef MOS_CLI_CONFIG_HPP_
#define MOS_CLI_CONFIG_HPP_

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "mos/experiments.hpp"

namespace mos::cli {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// Parsed experiment config. Paths are already resolved against the config
// file's directory.
struct RunConfig {
  ExperimentSpec spec;
  std::optional<std::filesystem::path> out;
  std::optional<std::filesystem::path> svg;
  std::optional<int> workers;
  bool seed_set = false;  // `seed` present in the file
};

// YAML mapping with keys
//   name, regime, trials, seed, design, coef, redraw_design,
//   n, p, k0, snr_db (scalar or list; the grid is their product),
//   sigma2, selectors (list), workers, out, svg.
// Without `regime`, trials, n, p, k0, selectors and one of snr_db / sigma2
// are required. Throws ConfigError naming the field.
RunConfig parse_run_config(const std::string& text,
                           const std::filesystem::path& base_dir,
                           const std::string& default_name = "config");
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace mos::cli

#endif  // MOS_CLI_CONFIG_HPP_
