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
#include "confsom/similarity.hpp"
#include "confsom/som.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace confsom {

/// Coordinate time series of one atom over a neuron's frames.
struct AtomSeries {
  std::span<const double> x, y, z;
};

/// Per-atom x/y/z series over the frames won by one neuron.
class AtomSeriesSet {
 public:
  AtomSeriesSet(std::size_t neuron, std::vector<std::size_t> frames_used, std::size_t atoms,
                std::vector<double> data);

  std::size_t neuron() const { return neuron_; }
  const std::vector<std::size_t>& frames_used() const { return frames_used_; }
  std::size_t atoms() const { return atoms_; }
  std::size_t length() const { return frames_used_.size(); }

  AtomSeries atom(std::size_t a) const;

 private:
  std::size_t neuron_;
  std::vector<std::size_t> frames_used_;
  std::size_t atoms_;
  std::vector<double> data_;  // [atom][axis][frame]
};

/// Throws InsufficientFrames when the neuron won fewer than min_frames frames.
AtomSeriesSet gather_neuron_series(const Ensemble& e, const Assignment& a, std::size_t neuron,
                                   std::size_t min_frames = 3);

/// |cos| between the concatenated, per-axis centred fluctuation vectors.
Correlation cosine_fluct(const AtomSeries& a, const AtomSeries& b);

/// Mean over x, y, z of |m(axis_a, axis_b)|.
Correlation xyz_avg_abs_corr(const AtomSeries& a, const AtomSeries& b, ScalarMeasure m);

/// |pearson| over the concatenated centred fluctuation vectors.
Correlation concat_pearson(const AtomSeries& a, const AtomSeries& b);

enum class Measure { xyz_pearson, xyz_spearman, xyz_bicor, cosine, concat_pearson };

/// How per-axis series are combined: averaged per-axis scores or a single
/// score over concatenated 3F-vectors. Determined by the measure.
enum class Combination { axis_mean, concatenated };

Measure parse_measure(std::string_view s);
std::string_view to_string(Measure m);
std::string_view to_string(Combination c);
Combination combination_of(Measure m);

struct SimilarityMatrix {
  Eigen::MatrixXd values;  // unsigned, in [0, 1], unit diagonal
  Eigen::MatrixXd signed_values;  // same measure before absolute values
  Measure measure = Measure::xyz_pearson;
  Combination combination = Combination::axis_mean;
  std::size_t degenerate_pairs = 0;

  std::size_t size() const { return static_cast<std::size_t>(values.rows()); }
};

SimilarityMatrix similarity_matrix(const AtomSeriesSet& s, Measure measure);

/// N x N CSV, full precision, no header.
std::string matrix_csv(const Eigen::MatrixXd& m);

/// Residue-number separation of two atoms. Atoms on different chains are
/// infinitely far apart; without residue numbers the node-index gap is used.
std::size_t sequence_gap(const std::vector<AtomLabel>& labels, std::size_t a, std::size_t b);

enum class GraphMode { hard, soft };
std::string_view to_string(GraphMode m);

struct Edge {
  std::size_t a;  // a < b
  std::size_t b;
  double weight;  // in (0, 1]
};

struct AtomGraph {
  std::vector<AtomLabel> nodes;
  std::vector<Edge> edges;  // sorted by (a, b)
  GraphMode mode = GraphMode::hard;
  double tau = 0.0;
  double beta = 1.0;
  std::size_t min_seq_gap = 0;

  std::size_t size() const { return nodes.size(); }
};

/// Edge (a, b) iff S_ab >= tau and sequence_gap(a, b) > min_seq_gap, weight S_ab.
AtomGraph hard_threshold(const SimilarityMatrix& s, const std::vector<AtomLabel>& labels, double tau,
                         std::size_t min_seq_gap = 0);

/// Every pair weighted S_ab^beta; zero weights omitted.
AtomGraph soft_threshold(const SimilarityMatrix& s, const std::vector<AtomLabel>& labels, double beta);

/// q-quantile (linear interpolation) of the upper-triangle entries.
double pick_threshold(const SimilarityMatrix& s, double q);

}  // namespace confsom
