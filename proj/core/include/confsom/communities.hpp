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
#include "confsom/networks.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace confsom {

struct CommunityPartition {
  std::vector<std::size_t> community_of;  // contiguous ids, by lowest member node
  std::size_t communities = 0;
  std::optional<double> q;  // unset for edgeless graphs
  std::string method;
};

/// Components as communities; isolated nodes become singletons.
CommunityPartition connected_components(const AtomGraph& g);

/// Weighted Newman modularity. Throws std::domain_error on an edgeless graph.
double modularity(const AtomGraph& g, const std::vector<std::size_t>& community_of);

/// Agglomerative (Clauset-Newman-Moore style) modularity maximisation:
/// repeatedly merge the connected community pair with the largest gain,
/// lowest id pair on ties, while the gain exceeds 1e-12.
CommunityPartition greedy_modularity(const AtomGraph& g);

enum class EdgeKind { local, long_range };
std::string_view to_string(EdgeKind k);

struct EdgeClass {
  std::vector<EdgeKind> kind;          // parallel to g.edges
  std::vector<double> mean_distance;   // mean 3D distance over the neuron's frames (Angstrom)
  std::size_t seq_gap = 10;
  bool index_gap_fallback = false;     // residue numbers were missing

  std::size_t long_range_count() const;
};

/// Long-range iff the residue separation exceeds seq_gap.
EdgeClass classify_edges(const AtomGraph& g, std::size_t seq_gap, const Ensemble& e,
                         const std::vector<std::size_t>& frames_used, Warnings* warnings = nullptr);

struct HubAtom {
  std::size_t node;
  double degree;
};

/// Nodes with non-zero weighted degree, highest first (ties to lowest index).
std::vector<HubAtom> hub_atoms(const AtomGraph& g, std::size_t top_k);

}  // namespace confsom
