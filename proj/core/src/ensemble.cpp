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

#include "confsom/ensemble.hpp"

#include <cmath>
#include <stdexcept>

namespace confsom {

std::string AtomLabel::display() const {
  if (residue.empty() && !seq) return name;
  std::string out = residue.empty() ? name : residue;
  if (seq) out += std::to_string(*seq);
  if (!chain.empty()) out += ":" + chain;
  return out;
}

Ensemble::Ensemble(CoordMatrix coords, std::vector<AtomLabel> labels, std::vector<double> times,
                   std::string source)
    : coords_(std::move(coords)),
      labels_(std::move(labels)),
      times_(std::move(times)),
      source_(std::move(source)) {
  if (coords_.rows() < 1) throw std::invalid_argument("ensemble needs at least one frame");
  if (labels_.size() < 2) throw std::invalid_argument("ensemble needs at least two atoms");
  if (static_cast<std::size_t>(coords_.cols()) != 3 * labels_.size()) {
    throw std::invalid_argument("coordinate matrix has " + std::to_string(coords_.cols()) +
                                " columns, expected " + std::to_string(3 * labels_.size()));
  }
  if (!coords_.allFinite()) throw std::invalid_argument("non-finite coordinate in ensemble");
  if (!times_.empty()) {
    if (times_.size() != frames()) throw std::invalid_argument("frame_times size differs from frame count");
    for (std::size_t i = 1; i < times_.size(); ++i) {
      if (!(times_[i] > times_[i - 1])) throw std::invalid_argument("frame_times not strictly increasing");
    }
  }
}

Eigen::Vector3d Ensemble::position(std::size_t f, std::size_t atom) const {
  const auto row = frame(f);
  const auto c = static_cast<Eigen::Index>(3 * atom);
  return {row(c), row(c + 1), row(c + 2)};
}

bool Ensemble::has_sequence_numbers() const {
  for (const auto& l : labels_) {
    if (!l.seq) return false;
  }
  return true;
}

Ensemble Ensemble::select_frames(const std::vector<std::size_t>& indices) const {
  CoordMatrix out(static_cast<Eigen::Index>(indices.size()), coords_.cols());
  std::vector<double> times;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= frames()) throw std::out_of_range("frame index out of range");
    out.row(static_cast<Eigen::Index>(i)) = frame(indices[i]);
    if (has_times()) times.push_back(times_[indices[i]]);
  }
  return Ensemble(std::move(out), labels_, std::move(times), source_);
}

}  // namespace confsom
