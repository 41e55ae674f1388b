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

#include "confsom/ensemble_io.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <stdexcept>

namespace confsom {

namespace {

using Points = Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>;

Points frame_points(const Ensemble& e, std::size_t f) {
  const auto n = static_cast<Eigen::Index>(e.atoms());
  return Eigen::Map<const Points>(e.coords().row(static_cast<Eigen::Index>(f)).data(), n, 3);
}

}  // namespace

SuperposeResult superpose_kabsch(const Ensemble& e, std::size_t reference_frame, Warnings* warnings) {
  if (reference_frame >= e.frames()) throw std::out_of_range("superpose_kabsch: reference frame out of range");

  const Points ref = frame_points(e, reference_frame);
  const Eigen::RowVector3d ref_center = ref.colwise().mean();
  const Points ref_centered = ref.rowwise() - ref_center;

  CoordMatrix out = e.coords();
  std::vector<std::size_t> degenerate;

  for (std::size_t f = 0; f < e.frames(); ++f) {
    if (f == reference_frame) continue;
    const Points mobile = frame_points(e, f);
    const Eigen::RowVector3d center = mobile.colwise().mean();
    const Points centered = mobile.rowwise() - center;

    // Cross-covariance; rank < 2 leaves the rotation undetermined.
    const Eigen::Matrix3d h = centered.transpose() * ref_centered;
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::Vector3d s = svd.singularValues();
    if (!(s(0) > 1e-12) || s(1) <= 1e-10 * s(0)) {
      degenerate.push_back(f);
      warn(warnings, "superpose: frame " + std::to_string(f) + " is degenerate (collinear or coincident atoms); left untransformed");
      continue;
    }
    const Eigen::Matrix3d u = svd.matrixU();
    const Eigen::Matrix3d v = svd.matrixV();
    Eigen::Matrix3d correction = Eigen::Matrix3d::Identity();
    if ((v * u.transpose()).determinant() < 0.0) correction(2, 2) = -1.0;
    const Eigen::Matrix3d rotation = v * correction * u.transpose();

    // Row form of x' = R (x - c) + c_ref.
    const Points moved = (centered * rotation.transpose()).rowwise() + ref_center;
    out.row(static_cast<Eigen::Index>(f)) =
        Eigen::Map<const Eigen::RowVectorXd>(moved.data(), static_cast<Eigen::Index>(e.dim()));
  }
  return {Ensemble(std::move(out), e.labels(), e.times(), e.source()), std::move(degenerate)};
}

}  // namespace confsom
