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

#ifndef MOS_RANDOM_HPP_
#define MOS_RANDOM_HPP_

// Reproducible random numbers.
//
// Engine: std::mt19937_64, whose output sequence is fixed by the C++
// standard. The uniform and normal transforms are implemented here (the
// std:: distributions are implementation-defined), so a given seed yields
// the same doubles with any conforming standard library.
//
// Stream splitting: every (seed, point, trial, stream) tuple maps through
// SplitMix64 to an independent engine seed; see derive_seed.

#include <cstdint>
#include <random>

namespace mos {

enum class Stream : std::uint64_t {
  kDesign = 0,
  kSigns = 1,
  kNoise = 2,
  kCalibration = 3,
  kPoint = 4,
};

// SplitMix64 finaliser.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Seed for one (experiment seed, grid point, trial, stream) work unit.
// Folds each component in turn: h = splitmix64(h ^ component).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t point,
                          std::uint64_t trial, Stream stream) noexcept;

// Trial index reserved for draws shared by all trials of a point (the
// fixed design matrix).
inline constexpr std::uint64_t kSharedTrial = ~std::uint64_t{0};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();

  // Uniform on (0, 1).
  double uniform_open();

  // Standard normal, Marsaglia polar method (second variate cached).
  double normal();

  // Equiprobable +1 / -1.
  double sign() { return (next_u64() >> 63) ? -1.0 : 1.0; }

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace mos

#endif  // MOS_RANDOM_HPP_
