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

#include "confsom/ensemble.hpp"
#include "confsom/error.hpp"
#include "confsom/som.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace confsom {

/// Merge j joins nodes `left` < `right`. Leaves are 0..M-1; the node created
/// by merge j is M + j.
struct Merge {
  std::size_t left;
  std::size_t right;
  double height;
};

struct Dendrogram {
  std::size_t leaves = 0;
  std::vector<Merge> merges;

  std::vector<double> heights() const;
};

/// Complete-linkage agglomeration of the rows of `points` (Euclidean).
/// Equal distances resolve to the lowest node-id pair.
Dendrogram complete_linkage(const CoordMatrix& points);

/// Mojena's stopping rule with diagnostics. For M leaves and heights
/// a_1..a_{M-1}: the smallest j >= 1 with a_{j+1} > mean + k * sd (sample sd)
/// gives K = M - j; no exceedance gives the fallback K = 2.
struct MojenaCut {
  std::size_t clusters = 0;
  double k_const = 1.25;
  double mean = 0.0;
  double sd = 0.0;
  double threshold = 0.0;
  bool fallback = false;
  bool undefined = false;  // fewer than 3 leaves; clusters = M
};

MojenaCut mojena_cut(const Dendrogram& d, double k_const = 1.25, Warnings* warnings = nullptr);

struct MapPartition {
  std::vector<std::size_t> cluster_of;  // per neuron, ids 0..K-1 by lowest member
  std::size_t clusters = 0;
  std::optional<double> k_const;

  std::vector<std::size_t> members(std::size_t cluster) const;
};

/// Undoes the last K - 1 merges.
MapPartition cut_dendrogram(const Dendrogram& d, std::size_t k);

struct ClusterSummary {
  std::size_t cluster = 0;
  std::vector<std::size_t> neurons;
  Eigen::RowVectorXd centroid;
  std::size_t won_frames = 0;
  std::size_t representative_frame = 0;
  double representative_distance = 0.0;
  // The cluster won no frames, so the representative came from all frames.
  bool searched_all_frames = false;
};

/// Centroid = mean member prototype; representative = the frame won by the
/// cluster closest to the centroid (ties to the lowest frame index).
std::vector<ClusterSummary> cluster_summaries(const MapPartition& p, const SomMap& map, const Ensemble& e,
                                              const Assignment& a);

/// "left,right,height" rows, full precision.
std::string dendrogram_csv(const Dendrogram& d);

}  // namespace confsom
