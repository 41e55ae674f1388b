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

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace confsom {

/// Hexagonal sheet of rows x cols neurons. Neuron i = r * cols + c sits at
/// (c + 0.5 * (r mod 2), r * sqrt(3) / 2), so lattice neighbours are exactly
/// one unit apart.
class HexGrid {
 public:
  HexGrid(std::size_t rows, std::size_t cols);

  /// Most nearly square rows x cols factorisation of m (rows <= cols);
  /// 100 gives 10 x 10.
  static HexGrid for_size(std::size_t m);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return rows_ * cols_; }

  Eigen::Vector2d position(std::size_t neuron) const;
  double distance(std::size_t i, std::size_t j) const;

  bool operator==(const HexGrid&) const = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
};

/// Euclidean distance between hexagon centres; throws std::out_of_range.
double grid_distance(const HexGrid& grid, std::size_t i, std::size_t j);

/// Gaussian neighbourhood exp(-d^2 / (2 sigma^2)).
double neighborhood(double d, double sigma);

enum class TrainingMode { batch, sequential };
enum class InitMethod { linear, random };

std::string_view to_string(TrainingMode m);
std::string_view to_string(InitMethod m);
TrainingMode parse_training_mode(std::string_view s);
InitMethod parse_init_method(std::string_view s);

struct TrainingConfig {
  std::size_t map_size = 100;
  double radius0 = 3.0;
  double radius_final = 1.0;
  // Epochs in batch mode; train_len * F presentations in sequential mode.
  std::size_t train_len = 5000;
  TrainingMode mode = TrainingMode::batch;
  double alpha0 = 0.5;
  InitMethod init = InitMethod::linear;
  std::uint64_t seed = 1;

  /// Throws ConfigError when a range invariant fails.
  void validate() const;

  bool operator==(const TrainingConfig&) const = default;
};

class SomMap {
 public:
  SomMap(HexGrid grid, CoordMatrix prototypes, TrainingConfig config = {}, bool trained = false);

  const HexGrid& grid() const { return grid_; }
  std::size_t size() const { return grid_.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(prototypes_.cols()); }
  const CoordMatrix& prototypes() const { return prototypes_; }
  auto prototype(std::size_t i) const { return prototypes_.row(static_cast<Eigen::Index>(i)); }
  const TrainingConfig& config() const { return config_; }
  bool trained() const { return trained_; }

  /// Lattice distances between all neuron pairs, row-major M x M.
  const std::vector<double>& grid_distances() const { return grid_distances_; }

 private:
  HexGrid grid_;
  CoordMatrix prototypes_;
  TrainingConfig config_;
  bool trained_;
  std::vector<double> grid_distances_;
};

/// Best-matching unit: argmin_i ||x - m_i||, ties to the lowest index.
/// Throws DimensionError on a dimensionality mismatch.
std::size_t bmu(const Eigen::Ref<const Eigen::RowVectorXd>& x, const SomMap& map);

SomMap init_map(const Ensemble& e, const TrainingConfig& cfg, Warnings* warnings = nullptr);

SomMap train_batch(const SomMap& map, const Ensemble& e, const TrainingConfig& cfg);
SomMap train_sequential(const SomMap& map, const Ensemble& e, const TrainingConfig& cfg);
/// Dispatches on cfg.mode.
SomMap train(const SomMap& map, const Ensemble& e, const TrainingConfig& cfg);

struct Assignment {
  std::vector<std::size_t> bmu;   // per frame
  std::vector<std::size_t> hits;  // per neuron
  double qe = 0.0;                // mean ||x_f - m_bmu(f)||

  /// Frames won by `neuron`, in frame order.
  std::vector<std::size_t> frames_of(std::size_t neuron) const;
};

Assignment map_ensemble(const SomMap& map, const Ensemble& e);

/// Fraction of frames whose first and second BMUs are not lattice neighbours.
double topographic_error(const SomMap& map, const Ensemble& e);

/// Versioned JSON document: grid dims, config echo, row-major prototypes.
std::string map_to_json(const SomMap& map);
SomMap map_from_json(std::string_view text);

}  // namespace confsom
