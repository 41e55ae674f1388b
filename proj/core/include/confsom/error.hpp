// Copyright 2026 The confsom Authors.
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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace confsom {

// Non-fatal conditions collected along a run and echoed in the report.
using Warnings = std::vector<std::string>;

inline void warn(Warnings* sink, std::string message) {
  if (sink != nullptr) sink->push_back(std::move(message));
}

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unreadable input. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& message, std::size_t line = 0)
      : Error(line == 0 ? message : "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Vector or ensemble dimensionality does not match a trained map.
class DimensionError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

/// A neuron won fewer frames than a per-neuron analysis needs.
class InsufficientFrames : public Error {
 public:
  InsufficientFrames(std::size_t neuron, std::size_t hits, std::size_t required)
      : Error("insufficient frames: neuron " + std::to_string(neuron) + " won " +
              std::to_string(hits) + ", need " + std::to_string(required)),
        neuron_(neuron),
        hits_(hits) {}

  std::size_t neuron() const noexcept { return neuron_; }
  std::size_t hits() const noexcept { return hits_; }

 private:
  std::size_t neuron_;
  std::size_t hits_;
};

}  // namespace confsom
