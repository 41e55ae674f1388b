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

#include "confsom/format.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <stdexcept>

namespace confsom {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<long> to_long(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  long v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size()) return std::nullopt;
  return v;
}

// Splits text into lines without the terminating '\n'; keeps '\r' for trim() to drop.
std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::string_view column(std::string_view line, std::size_t first, std::size_t width) {
  if (first >= line.size()) return {};
  return line.substr(first, width);
}

char column_char(std::string_view line, std::size_t index) {
  return index < line.size() ? line[index] : ' ';
}

Ensemble build(std::vector<std::vector<double>> rows, std::vector<AtomLabel> labels, std::string source) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  CoordMatrix coords(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t f = 0; f < rows.size(); ++f) {
    for (std::size_t c = 0; c < cols; ++c) {
      coords(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(c)) = rows[f][c];
    }
  }
  try {
    return Ensemble(std::move(coords), std::move(labels), {}, std::move(source));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

struct PdbModel {
  std::vector<double> coords;
  std::vector<AtomLabel> labels;
  std::size_t first_line = 0;
};

}  // namespace

bool AtomSelection::accepts(std::string_view name, char alt_loc, char chain) const {
  if (name != atom_name) return false;
  if (alt_loc != ' ' && alt_loc != 'A') return false;
  if (!chains.empty() && chains.find(chain) == std::string::npos) return false;
  return true;
}

Format parse_format(std::string_view name) {
  if (name == "pdb") return Format::pdb;
  if (name == "xyz") return Format::xyz;
  if (name == "csv") return Format::csv;
  throw ConfigError("unknown input format '" + std::string(name) + "' (expected pdb, xyz or csv)");
}

std::string_view format_name(Format f) {
  switch (f) {
    case Format::pdb: return "pdb";
    case Format::xyz: return "xyz";
    case Format::csv: return "csv";
  }
  return "pdb";
}

Format infer_format(std::string_view path) {
  const auto dot = path.rfind('.');
  if (dot == std::string_view::npos) return Format::pdb;
  std::string ext(path.substr(dot + 1));
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == "xyz") return Format::xyz;
  if (ext == "csv" || ext == "txt") return Format::csv;
  return Format::pdb;
}

Ensemble parse_pdb(std::string_view text, const AtomSelection& selection, std::string source) {
  std::vector<PdbModel> models;
  PdbModel current;
  bool open = false;

  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    const std::size_t lineno = i + 1;
    const std::string_view record = line.substr(0, std::min<std::size_t>(6, line.size()));

    if (record.starts_with("MODEL")) {
      if (open && !current.labels.empty()) models.push_back(std::move(current));
      current = PdbModel{};
      current.first_line = lineno;
      open = true;
      continue;
    }
    if (record.starts_with("ENDMDL")) {
      models.push_back(std::move(current));
      current = PdbModel{};
      open = false;
      continue;
    }
    if (record != "ATOM  " && record != "ATOM") continue;

    const std::string name(trim(column(line, 12, 4)));
    const char alt_loc = column_char(line, 16);
    const char chain = column_char(line, 21);
    const char insertion = column_char(line, 26);
    if (insertion != ' ' || !selection.accepts(name, alt_loc, chain)) continue;

    if (line.size() < 54) throw ParseError("ATOM record too short for coordinates", lineno);
    for (std::size_t axis = 0; axis < 3; ++axis) {
      const auto field = column(line, 30 + 8 * axis, 8);
      const auto v = to_double(field);
      if (!v || !std::isfinite(*v)) {
        throw ParseError("malformed coordinate field '" + std::string(field) + "'", lineno);
      }
      current.coords.push_back(*v);
    }
    AtomLabel label;
    label.name = name;
    label.residue = std::string(trim(column(line, 17, 3)));
    if (auto seq = to_long(column(line, 22, 4))) label.seq = static_cast<int>(*seq);
    if (chain != ' ') label.chain = std::string(1, chain);
    if (current.labels.empty() && current.first_line == 0) current.first_line = lineno;
    current.labels.push_back(std::move(label));
  }
  if (!current.labels.empty()) models.push_back(std::move(current));

  if (models.empty() || std::all_of(models.begin(), models.end(), [](const PdbModel& m) { return m.labels.empty(); })) {
    throw ParseError("no ATOM records match the selection (atom name '" + selection.atom_name + "')");
  }
  const auto& first = models.front();
  std::vector<std::vector<double>> rows;
  rows.reserve(models.size());
  for (std::size_t m = 0; m < models.size(); ++m) {
    if (models[m].labels.size() != first.labels.size()) {
      throw ParseError("inconsistent atom count: model " + std::to_string(m + 1) + " has " +
                           std::to_string(models[m].labels.size()) + " selected atoms, model 1 has " +
                           std::to_string(first.labels.size()),
                       models[m].first_line);
    }
    if (models[m].labels != first.labels) {
      throw ParseError("inconsistent atom labels in model " + std::to_string(m + 1), models[m].first_line);
    }
    rows.push_back(std::move(models[m].coords));
  }
  return build(std::move(rows), first.labels, std::move(source));
}

Ensemble parse_xyz(std::string_view text, std::string source) {
  const auto lines = split_lines(text);
  std::vector<std::vector<double>> rows;
  std::vector<AtomLabel> labels;

  std::size_t i = 0;
  while (true) {
    while (i < lines.size() && trim(lines[i]).empty()) ++i;
    if (i >= lines.size()) break;

    const std::size_t count_line = i + 1;
    const auto count = to_long(lines[i]);
    if (!count || *count < 0) throw ParseError("expected atom count", count_line);
    const auto n = static_cast<std::size_t>(*count);
    if (!rows.empty() && n != labels.size()) {
      throw ParseError("count line mismatch: block declares " + std::to_string(n) + " atoms, first block has " +
                           std::to_string(labels.size()),
                       count_line);
    }
    i += 2;  // count + comment
    if (i > lines.size()) throw ParseError("block truncated before comment line", count_line);

    std::vector<double> row;
    row.reserve(3 * n);
    for (std::size_t a = 0; a < n; ++a, ++i) {
      if (i >= lines.size()) {
        throw ParseError("count line mismatch: block declares " + std::to_string(n) + " atoms but contains " +
                             std::to_string(a),
                         count_line);
      }
      const auto tokens = split_ws(lines[i]);
      if (tokens.size() < 4) {
        throw ParseError("expected 'label x y z', got '" + std::string(trim(lines[i])) + "'", i + 1);
      }
      for (std::size_t axis = 0; axis < 3; ++axis) {
        const auto v = to_double(tokens[1 + axis]);
        if (!v || !std::isfinite(*v)) {
          throw ParseError("non-numeric coordinate '" + std::string(tokens[1 + axis]) + "'", i + 1);
        }
        row.push_back(*v);
      }
      if (rows.empty()) labels.push_back(AtomLabel{std::string(tokens[0]), {}, std::nullopt, {}});
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("no XYZ blocks found");
  return build(std::move(rows), std::move(labels), std::move(source));
}

Ensemble parse_csv(std::string_view text, std::string source) {
  const auto lines = split_lines(text);
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  bool seen_first = false;

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto line = trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;

    std::vector<double> row;
    bool numeric = true;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      const auto field = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      const auto v = to_double(field);
      if (!v || !std::isfinite(*v)) {
        numeric = false;
        if (seen_first) throw ParseError("non-numeric field '" + std::string(trim(field)) + "'", i + 1);
      } else {
        row.push_back(*v);
      }
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!seen_first) {
      seen_first = true;
      if (!numeric) continue;  // header
    }
    if (rows.empty()) {
      width = row.size();
      if (width % 3 != 0) {
        throw ParseError("column count " + std::to_string(width) + " is not divisible by 3", i + 1);
      }
    } else if (row.size() != width) {
      throw ParseError("ragged rows: expected " + std::to_string(width) + " columns, got " +
                           std::to_string(row.size()),
                       i + 1);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("no numeric rows in CSV input");

  std::vector<AtomLabel> labels;
  for (std::size_t a = 0; a < width / 3; ++a) {
    labels.push_back(AtomLabel{"A" + std::to_string(a + 1), {}, std::nullopt, {}});
  }
  return build(std::move(rows), std::move(labels), std::move(source));
}

std::string read_text(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open input file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Ensemble read_ensemble(const std::string& path, Format format, const AtomSelection& selection) {
  const std::string text = read_text(path);
  const std::string source = path == "-" ? "<stdin>" : path;
  switch (format) {
    case Format::pdb: return parse_pdb(text, selection, source);
    case Format::xyz: return parse_xyz(text, source);
    case Format::csv: return parse_csv(text, source);
  }
  throw ConfigError("unknown format");
}

std::string write_pdb(const Ensemble& e, std::size_t frame) {
  if (frame >= e.frames()) throw std::out_of_range("write_pdb: frame index out of range");

  std::string out = "REMARK   1 FRAME " + std::to_string(frame) + "\n";
  char buf[128];
  for (std::size_t a = 0; a < e.atoms(); ++a) {
    const auto& label = e.labels()[a];
    const Eigen::Vector3d p = e.position(frame, a);
    for (int axis = 0; axis < 3; ++axis) {
      if (format_fixed(p[axis], 3).size() > 8) {
        throw std::out_of_range("write_pdb: coordinate " + format_double(p[axis]) + " does not fit PDB columns");
      }
    }
    std::string residue = label.residue.empty() ? "UNK" : label.residue.substr(0, 3);
    const int seq = label.seq ? *label.seq : static_cast<int>(a + 1);
    const char chain = label.chain.empty() ? ' ' : label.chain.front();
    std::snprintf(buf, sizeof buf, "ATOM  %5d  CA  %3s %c%4d    %8.3f%8.3f%8.3f  1.00  0.00           C  \n",
                  static_cast<int>((a + 1) % 100000), residue.c_str(), chain, seq % 10000, p.x(), p.y(), p.z());
    out += buf;
  }
  out += "TER\nEND\n";
  return out;
}

std::string write_csv(const Ensemble& e) {
  std::string out;
  for (std::size_t a = 0; a < e.atoms(); ++a) {
    const auto n = std::to_string(a + 1);
    out += (a == 0 ? "x" : ",x") + n + ",y" + n + ",z" + n;
  }
  out += '\n';
  for (std::size_t f = 0; f < e.frames(); ++f) {
    const auto row = e.frame(f);
    for (Eigen::Index c = 0; c < row.size(); ++c) {
      if (c > 0) out += ',';
      out += format_double(row(c));
    }
    out += '\n';
  }
  return out;
}

Ensemble subsample(const Ensemble& e, std::size_t stride) {
  if (stride == 0) throw std::invalid_argument("subsample: stride must be >= 1");
  std::vector<std::size_t> keep;
  for (std::size_t f = 0; f < e.frames(); f += stride) keep.push_back(f);
  return e.select_frames(keep);
}

double frame_rmsd(const Ensemble& e, std::size_t a, std::size_t b) {
  if (a >= e.frames() || b >= e.frames()) throw std::out_of_range("frame_rmsd: frame index out of range");
  return std::sqrt((e.frame(a) - e.frame(b)).squaredNorm() / static_cast<double>(e.atoms()));
}

}  // namespace confsom
