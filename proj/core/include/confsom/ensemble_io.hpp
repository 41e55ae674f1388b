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

#include <string>
#include <string_view>
#include <vector>

namespace confsom {

/// Which ATOM records of a PDB file become ensemble atoms. Alternate
/// locations other than blank or "A" are always rejected, as are records
/// with an insertion code.
struct AtomSelection {
  std::string atom_name = "CA";
  std::string chains;  // accepted chain ids; empty accepts every chain

  bool accepts(std::string_view name, char alt_loc, char chain) const;
};

enum class Format { pdb, xyz, csv };

Format parse_format(std::string_view name);
std::string_view format_name(Format f);
/// Guesses from the file extension; defaults to pdb.
Format infer_format(std::string_view path);

/// One frame per MODEL/ENDMDL block, or a single frame of bare ATOM records.
Ensemble parse_pdb(std::string_view text, const AtomSelection& selection = {},
                   std::string source = {});

/// Repeated blocks of "count / comment / count lines of `label x y z`".
Ensemble parse_xyz(std::string_view text, std::string source = {});

/// One frame per row, 3N numeric columns, optional non-numeric header row.
/// Atoms get synthetic labels A1..AN.
Ensemble parse_csv(std::string_view text, std::string source = {});

/// Reads a whole file, or standard input when `path` is "-". Throws ParseError
/// when the file cannot be opened.
std::string read_text(const std::string& path);

Ensemble read_ensemble(const std::string& path, Format format, const AtomSelection& selection = {});

/// Single-model PDB of CA ATOM records for one frame, coordinates in 8.3 fixed point.
std::string write_pdb(const Ensemble& e, std::size_t frame);

/// Full-precision CSV of every frame with an x1,y1,z1,... header.
std::string write_csv(const Ensemble& e);

/// Keeps frames 0, stride, 2*stride, ...
Ensemble subsample(const Ensemble& e, std::size_t stride);

struct SuperposeResult {
  Ensemble ensemble;
  std::vector<std::size_t> degenerate_frames;  // left untransformed
};

/// Least-squares rigid superposition of every frame onto `reference_frame`.
/// Frames whose cross-covariance with the reference has rank < 2
/// (collinear or coincident atoms) are passed through and listed.
SuperposeResult superpose_kabsch(const Ensemble& e, std::size_t reference_frame,
                                 Warnings* warnings = nullptr);

/// Coordinate RMSD between two frames without fitting.
double frame_rmsd(const Ensemble& e, std::size_t a, std::size_t b);

}  // namespace confsom
