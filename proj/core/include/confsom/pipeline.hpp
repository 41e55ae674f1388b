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
#include "confsom/ensemble.hpp"
#include "confsom/networks.hpp"
#include "confsom/report.hpp"
#include "confsom/som.hpp"

#include <optional>
#include <string>
#include <vector>

namespace confsom {

struct PreparedInput {
  Ensemble ensemble;
  InputRecord record;
};

/// Ingest, optional superposition, then subsampling.
PreparedInput prepare_input(const PipelineConfig& cfg, Warnings* warnings);

struct TrainedMap {
  SomMap map;
  Assignment assignment;
  double topographic_error = 0.0;
  std::string init_used;
};

TrainedMap train_on(const Ensemble& e, const PipelineConfig& cfg, Warnings* warnings);

struct ClusteringResult {
  Dendrogram dendrogram;
  MojenaCut cut;
  MapPartition partition;
  std::vector<ClusterSummary> summaries;
};

ClusteringResult cluster_map(const SomMap& map, const Ensemble& e, const Assignment& a, double mojena_k,
                             Warnings* warnings);

struct NeuronNetwork {
  std::size_t neuron = 0;
  std::vector<std::size_t> frames;
  SimilarityMatrix similarity;
  AtomGraph graph;
  CommunityPartition communities;
  EdgeClass classes;
  std::vector<HubAtom> hubs;
};

struct NetworkAnalysis {
  std::vector<NeuronNetwork> neurons;
  std::vector<SkippedNeuron> skipped;
};

/// Builds, partitions and classifies one network per neuron with at least
/// `min_frames` frames; the rest are listed as skipped.
NetworkAnalysis analyze_networks(const Ensemble& e, const Assignment& a, const NetworkConfig& cfg,
                                 Warnings* warnings);

// Subcommands. Each writes its artifacts below cfg.out and returns the
// written paths in a fixed order.
std::vector<std::string> run_train(const PipelineConfig& cfg);
std::vector<std::string> run_classify(const PipelineConfig& cfg, const std::string& map_path);
std::vector<std::string> run_cluster(const PipelineConfig& cfg, const std::string& map_path);
std::vector<std::string> run_networks(const PipelineConfig& cfg, const std::string& map_path);
std::vector<std::string> run_report(const PipelineConfig& cfg, const std::string& map_path);
std::vector<std::string> run_pipeline(const PipelineConfig& cfg);

}  // namespace confsom
