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

#include <Eigen/Core>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace confsom {

/// Row-major matrix; for ensembles row f is (x1, y1, z1, ..., xN, yN, zN) of frame f.
using CoordMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct AtomLabel {
  std::string name;         // atom name ("CA") or a synthetic label ("A7")
  std::string residue;      // residue name, empty when unknown
  std::optional<int> seq;   // residue sequence number
  std::string chain;

  /// Human-readable label, e.g. "ALA12:A" or "A7".
  std::string display() const;

  bool operator==(const AtomLabel&) const = default;
};

/// F conformations of N atoms, coordinates in Angstrom. Immutable once built.
class Ensemble {
 public:
  /// Throws std::invalid_argument when an invariant fails: F >= 1, N >= 2,
  /// 3N columns, finite coordinates, times either empty or F strictly
  /// increasing values.
  Ensemble(CoordMatrix coords, std::vector<AtomLabel> labels, std::vector<double> times = {},
           std::string source = {});

  std::size_t frames() const { return static_cast<std::size_t>(coords_.rows()); }
  std::size_t atoms() const { return labels_.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(coords_.cols()); }

  const CoordMatrix& coords() const { return coords_; }
  auto frame(std::size_t f) const { return coords_.row(static_cast<Eigen::Index>(f)); }
  Eigen::Vector3d position(std::size_t f, std::size_t atom) const;

  const std::vector<AtomLabel>& labels() const { return labels_; }
  const std::vector<double>& times() const { return times_; }
  bool has_times() const { return !times_.empty(); }
  const std::string& source() const { return source_; }

  /// True when every atom carries a residue sequence number.
  bool has_sequence_numbers() const;

  /// Copy of the listed frames, in the given order, with metadata preserved.
  Ensemble select_frames(const std::vector<std::size_t>& indices) const;

 private:
  CoordMatrix coords_;
  std::vector<AtomLabel> labels_;
  std::vector<double> times_;
  std::string source_;
};

}  // namespace confsom
