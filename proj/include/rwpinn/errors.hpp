// Copyright 2026 The rwpinn Authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rwpinn {

/// Invalid argument supplied to a public operation (bad index, shape mismatch).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operation was called in a state its contract forbids.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A non-finite value appeared; `component()` names where.
class NumericError : public std::runtime_error {
 public:
  NumericError(std::string component, double value)
      : std::runtime_error("non-finite value " + std::to_string(value) + " in " + component),
        component_(std::move(component)),
        value_(value) {}

  const std::string& component() const noexcept { return component_; }
  double value() const noexcept { return value_; }

 private:
  std::string component_;
  double value_;
};

/// Every ensemble member failed; `diagnostics()` holds one line per restart.
class DivergenceError : public std::runtime_error {
 public:
  explicit DivergenceError(std::vector<std::string> diagnostics)
      : std::runtime_error(join(diagnostics)), diagnostics_(std::move(diagnostics)) {}

  const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }

 private:
  static std::string join(const std::vector<std::string>& lines) {
    std::string s = "all restarts diverged";
    for (const auto& l : lines) s += "\n  " + l;
    return s;
  }

  std::vector<std::string> diagnostics_;
};

}  // namespace rwpinn
