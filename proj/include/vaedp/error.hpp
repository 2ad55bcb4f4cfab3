//
// Copyright 2026 The vaedp Authors
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

#ifndef VAEDP_ERROR_HPP_
#define VAEDP_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace vaedp {

// Base error. `kind()` is a stable machine-readable tag used by the CLI when
// emitting error JSON on stderr.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

// Bad wiring: incompatible layer dimensions, empty order grids, malformed
// configs.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& m) : Error("config", m) {}
};

// An operation was called in the wrong order (e.g. backward without a
// retained forward pass, median over an empty norm log).
class StateError : public Error {
 public:
  explicit StateError(const std::string& m) : Error("state", m) {}
};

// Non-finite values where finite ones are required.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& m) : Error("numeric", m) {}
};

// Invalid argument values: non-positive scales, shape mismatches, unknown
// enum names, labels out of range.
class ParamError : public Error {
 public:
  explicit ParamError(const std::string& m) : Error("param", m) {}
};

// A parameter is outside the regime a formula is valid for.
class OutOfRangeError : public Error {
 public:
  explicit OutOfRangeError(const std::string& m) : Error("out_of_range", m) {}
};

// Dataset-level contract violations (overlapping splits, duplicate ids).
class IntegrityError : public Error {
 public:
  explicit IntegrityError(const std::string& m) : Error("integrity", m) {}
};

// Data unusable for the requested task (e.g. single-class training set).
class DegenerateDataError : public Error {
 public:
  explicit DegenerateDataError(const std::string& m) : Error("degenerate_data", m) {}
};

// Filesystem failures.
class IoError : public Error {
 public:
  explicit IoError(const std::string& m) : Error("io", m) {}
};

}  // namespace vaedp

#endif  // VAEDP_ERROR_HPP_
