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

#ifndef MOS_ERROR_HPP_
#define MOS_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace mos {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An iterative method hit its iteration cap before reaching tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A design column lies (numerically) in the span of the preceding columns.
class RankDeficiencyError : public std::runtime_error {
 public:
  RankDeficiencyError(int column, const std::string& what)
      : std::runtime_error(what), column_(column) {}

  // 1-based index of the offending column.
  int column() const noexcept { return column_; }

 private:
  int column_;
};

// Singular k x k system in the explicit projector oracle.
class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An information criterion was asked to take log(0).
class DegenerateFitError : public std::runtime_error {
 public:
  DegenerateFitError(int order, const std::string& what)
      : std::runtime_error(what), order_(order) {}

  int order() const noexcept { return order_; }

 private:
  int order_;
};

// Design-penalty calibration could not bracket the target level.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mos

#endif  // MOS_ERROR_HPP_
