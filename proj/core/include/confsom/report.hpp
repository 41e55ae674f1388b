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

#include "confsom/clustering.hpp"
#include "confsom/communities.hpp"
#include "confsom/config.hpp"
#include "confsom/networks.hpp"
#include "confsom/som.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace confsom {

inline constexpr int kReportFormatVersion = 1;

/// Fill colour for cluster or community `id`; cycles over 12 colours.
std::string_view palette_color(std::size_t id);

/// Hexagonal SOM rendering. Outer hexagons are filled by cluster colour; an
/// inner hexagon of circumradius 0.9 * R * sqrt(hits / max_hits) encodes hits
/// by area. Neurons with no hits get no inner hexagon.
std::string render_som_svg(const SomMap& map, const Assignment& a, const MapPartition& p);

/// GraphML with node label/residue/community and edge weight/class keys.
std::string export_graphml(const AtomGraph& g, const CommunityPartition& c, const EdgeClass* classes = nullptr);

/// Undirected DOT; nodes filled by community colour, penwidth = 1 + 4 * weight.
std::string export_dot(const AtomGraph& g, const CommunityPartition& c, const EdgeClass* classes = nullptr);

struct InputRecord {
  std::string source;
  std::string format;
  std::size_t frames_read = 0;
  std::size_t frames_used = 0;
  std::size_t atoms = 0;
  std::size_t stride = 1;
  bool superposed = false;
  std::size_t reference_frame = 0;
  std::vector<std::size_t> degenerate_frames;

  bool operator==(const InputRecord&) const = default;
};

struct TrainingRecord {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::string mode;
  std::string train_len_unit;  // "epochs" or "presentations_per_frame"
  std::string init_used;
  double quantization_error = 0.0;
  double topographic_error = 0.0;
  std::vector<std::size_t> bmu;
  std::vector<std::size_t> hits;

  bool operator==(const TrainingRecord&) const = default;
};

struct ClusterRecord {
  std::size_t id = 0;
  std::vector<std::size_t> neurons;
  std::vector<double> centroid;
  std::size_t won_frames = 0;
  std::size_t representative_frame = 0;
  double representative_distance = 0.0;
  bool searched_all_frames = false;
  std::string representative_pdb;

  bool operator==(const ClusterRecord&) const = default;
};

struct ClusteringRecord {
  std::vector<double> heights;
  double mojena_k = 1.25;
  double mojena_mean = 0.0;
  double mojena_sd = 0.0;
  double mojena_threshold = 0.0;
  bool fallback = false;
  bool undefined = false;
  std::size_t clusters = 0;
  std::vector<std::size_t> cluster_of;
  std::vector<ClusterRecord> summaries;

  bool operator==(const ClusteringRecord&) const = default;
};

struct NetworkRecord {
  std::size_t neuron = 0;
  std::size_t frames = 0;
  std::string measure;
  std::string combination;
  std::string mode;
  std::optional<double> tau;
  std::optional<double> beta;
  std::optional<double> quantile;
  std::size_t min_seq_gap = 0;
  std::size_t seq_gap = 10;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t communities = 0;
  std::optional<double> q;
  std::size_t long_range_edges = 0;
  std::size_t degenerate_pairs = 0;
  std::vector<std::size_t> hubs;
  std::string graphml;
  std::string dot;

  bool operator==(const NetworkRecord&) const = default;
};

struct SkippedNeuron {
  std::size_t neuron = 0;
  std::size_t hits = 0;
  std::string reason;

  bool operator==(const SkippedNeuron&) const = default;
};

struct NetworksSection {
  std::vector<NetworkRecord> neurons;
  std::vector<SkippedNeuron> skipped;

  bool operator==(const NetworksSection&) const = default;
};

struct RunReport {
  int format_version = kReportFormatVersion;
  std::string command;
  std::string config_json;  // resolved configuration, see config_to_json
  InputRecord input;
  TrainingRecord training;
  std::optional<ClusteringRecord> clustering;
  std::optional<NetworksSection> networks;
  std::vector<std::string> warnings;

  bool operator==(const RunReport&) const = default;
};

/// Sorted keys, shortest round-trip doubles, byte-deterministic.
std::string write_report(const RunReport& r);
RunReport read_report(std::string_view text);

}  // namespace confsom
