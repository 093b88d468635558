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

#ifndef MOS_CLI_VALIDATION_HPP_
#define MOS_CLI_VALIDATION_HPP_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace mos::cli {

enum class ValidationLevel {
  kQuick,  // 10^3 Monte Carlo trials
  kFull,   // 10^4 Monte Carlo trials
};

struct ValidationOptions {
  ValidationLevel level = ValidationLevel::kQuick;
  // Overrides every builtin regime seed and the validation-local seed.
  std::optional<std::uint64_t> seed;
  int workers = 0;  // 0 = hardware concurrency
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string observed;
  std::string expected;
  double seconds = 0.0;
};

inline constexpr int kCriterionCount = 9;

// Runs criteria 1..9 in order. When `progress` is set each line is written
// as soon as its criterion finishes.
std::vector<CriterionResult> run_validation(const ValidationOptions& options,
                                            std::ostream* progress = nullptr);

// "PASS C3 <title> | observed: ... | expected: ... | 1.2s"
std::string format_result(const CriterionResult& r);

}  // namespace mos::cli

#endif  // MOS_CLI_VALIDATION_HPP_
