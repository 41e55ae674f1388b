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

#include "confsom/ensemble_io.hpp"
#include "confsom/networks.hpp"
#include "confsom/som.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace confsom {

enum class ThresholdMode { quantile, tau, beta };
std::string_view to_string(ThresholdMode m);
ThresholdMode parse_threshold_mode(std::string_view s);

struct NetworkConfig {
  Measure measure = Measure::xyz_pearson;
  ThresholdMode threshold = ThresholdMode::quantile;
  double tau = 0.5;
  double quantile = 0.9;
  double beta = 6.0;
  std::size_t min_frames = 3;
  std::size_t min_seq_gap = 0;
  std::size_t seq_gap = 10;
  std::size_t top_hubs = 5;
  bool dump_matrices = false;

  bool operator==(const NetworkConfig&) const = default;
};

struct PipelineConfig {
  std::string input;
  std::optional<Format> format;  // inferred from the input path when unset
  AtomSelection selection;
  std::size_t stride = 1;
  bool superpose = false;
  std::size_t reference_frame = 0;
  TrainingConfig training;  // training.seed mirrors `seed`
  double mojena_k = 1.25;
  NetworkConfig network;
  std::uint64_t seed = 1;

  // Execution settings; not part of the echoed configuration.
  std::string out = "confsom_out";
  unsigned threads = 1;

  Format resolved_format() const;
  /// Throws ConfigError when a value is out of range.
  void validate() const;
};

/// Parses a JSON config document; unknown keys raise ConfigError.
PipelineConfig config_from_json(std::string_view text);

/// Resolved configuration (defaults filled, format inferred) as sorted-key
/// JSON, excluding the execution settings `out` and `threads`.
std::string config_to_json(const PipelineConfig& cfg);

}  // namespace confsom
