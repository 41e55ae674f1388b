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

#include "confsom/networks.hpp"

#include "confsom/error.hpp"
#include "confsom/format.hpp"
#include "confsom/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace confsom {

namespace {

std::vector<double> centered_concat(const AtomSeries& s) {
  std::vector<double> out;
  out.reserve(3 * s.x.size());
  for (auto axis : {s.x, s.y, s.z}) {
    double mean = 0.0;
    for (double v : axis) mean += v;
    mean /= static_cast<double>(axis.size());
    for (double v : axis) out.push_back(v - mean);
  }
  return out;
}

void check_series(const AtomSeries& a, const AtomSeries& b) {
  const std::size_t n = a.x.size();
  for (auto s : {a.y, a.z, b.x, b.y, b.z}) {
    if (s.size() != n) throw std::invalid_argument("atom series length mismatch");
  }
  if (n < 3) throw std::invalid_argument("atom series need at least 3 frames");
}

// Signed score of one atom pair under `measure`.
Correlation signed_score(Measure measure, const AtomSeries& a, const AtomSeries& b) {
  auto axis_mean = [&](ScalarMeasure m) {
    const Correlation cx = correlate(m, a.x, b.x);
    const Correlation cy = correlate(m, a.y, b.y);
    const Correlation cz = correlate(m, a.z, b.z);
    return Correlation{(cx.value + cy.value + cz.value) / 3.0, cx.degenerate || cy.degenerate || cz.degenerate};
  };
  switch (measure) {
    case Measure::xyz_pearson: return axis_mean(ScalarMeasure::pearson);
    case Measure::xyz_spearman: return axis_mean(ScalarMeasure::spearman);
    case Measure::xyz_bicor: return axis_mean(ScalarMeasure::bicor);
    case Measure::concat_pearson: {
      check_series(a, b);
      const auto u = centered_concat(a);
      const auto v = centered_concat(b);
      return pearson(u, v);
    }
    case Measure::cosine: {
      check_series(a, b);
      const auto u = centered_concat(a);
      const auto v = centered_concat(b);
      double uv = 0.0, uu = 0.0, vv = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) {
        uv += u[i] * v[i];
        uu += u[i] * u[i];
        vv += v[i] * v[i];
      }
      if (!(uu > 0.0) || !(vv > 0.0)) return {0.0, true};
      return {std::clamp(uv / (std::sqrt(uu) * std::sqrt(vv)), -1.0, 1.0), false};
    }
  }
  return {0.0, true};
}

}  // namespace

AtomSeriesSet::AtomSeriesSet(std::size_t neuron, std::vector<std::size_t> frames_used, std::size_t atoms,
                             std::vector<double> data)
    : neuron_(neuron), frames_used_(std::move(frames_used)), atoms_(atoms), data_(std::move(data)) {
  if (data_.size() != 3 * atoms_ * frames_used_.size()) {
    throw std::invalid_argument("atom series data size mismatch");
  }
}

AtomSeries AtomSeriesSet::atom(std::size_t a) const {
  if (a >= atoms_) throw std::out_of_range("atom index out of range");
  const std::size_t n = length();
  const double* base = data_.data() + 3 * n * a;
  return {{base, n}, {base + n, n}, {base + 2 * n, n}};
}

AtomSeriesSet gather_neuron_series(const Ensemble& e, const Assignment& a, std::size_t neuron,
                                   std::size_t min_frames) {
  if (a.bmu.size() != e.frames()) throw std::invalid_argument("assignment was not computed on this ensemble");
  if (neuron >= a.hits.size()) throw std::out_of_range("neuron index out of range");
  auto frames = a.frames_of(neuron);
  if (frames.size() < std::max<std::size_t>(min_frames, 3)) {
    throw InsufficientFrames(neuron, frames.size(), std::max<std::size_t>(min_frames, 3));
  }
  const std::size_t n = frames.size();
  std::vector<double> data(3 * e.atoms() * n);
  for (std::size_t atom = 0; atom < e.atoms(); ++atom) {
    for (std::size_t axis = 0; axis < 3; ++axis) {
      for (std::size_t k = 0; k < n; ++k) {
        data[(3 * atom + axis) * n + k] =
            e.coords()(static_cast<Eigen::Index>(frames[k]), static_cast<Eigen::Index>(3 * atom + axis));
      }
    }
  }
  return AtomSeriesSet(neuron, std::move(frames), e.atoms(), std::move(data));
}

Correlation cosine_fluct(const AtomSeries& a, const AtomSeries& b) {
  Correlation c = signed_score(Measure::cosine, a, b);
  c.value = std::abs(c.value);
  return c;
}

Correlation xyz_avg_abs_corr(const AtomSeries& a, const AtomSeries& b, ScalarMeasure m) {
  check_series(a, b);
  double sum = 0.0;
  bool degenerate = false;
  for (auto [u, v] : {std::pair{a.x, b.x}, std::pair{a.y, b.y}, std::pair{a.z, b.z}}) {
    const Correlation c = correlate(m, u, v);
    sum += std::abs(c.value);
    degenerate = degenerate || c.degenerate;
  }
  return {sum / 3.0, degenerate};
}

Correlation concat_pearson(const AtomSeries& a, const AtomSeries& b) {
  Correlation c = signed_score(Measure::concat_pearson, a, b);
  c.value = std::abs(c.value);
  return c;
}

Measure parse_measure(std::string_view s) {
  if (s == "xyz_pearson") return Measure::xyz_pearson;
  if (s == "xyz_spearman") return Measure::xyz_spearman;
  if (s == "xyz_bicor") return Measure::xyz_bicor;
  if (s == "cosine") return Measure::cosine;
  if (s == "concat_pearson") return Measure::concat_pearson;
  throw ConfigError("unknown similarity measure '" + std::string(s) + "'");
}

std::string_view to_string(Measure m) {
  switch (m) {
    case Measure::xyz_pearson: return "xyz_pearson";
    case Measure::xyz_spearman: return "xyz_spearman";
    case Measure::xyz_bicor: return "xyz_bicor";
    case Measure::cosine: return "cosine";
    case Measure::concat_pearson: return "concat_pearson";
  }
  return "xyz_pearson";
}

std::string_view to_string(Combination c) {
  return c == Combination::axis_mean ? "axis_mean" : "concatenated";
}

Combination combination_of(Measure m) {
  return (m == Measure::cosine || m == Measure::concat_pearson) ? Combination::concatenated
                                                                : Combination::axis_mean;
}

SimilarityMatrix similarity_matrix(const AtomSeriesSet& s, Measure measure) {
  const std::size_t n = s.atoms();
  SimilarityMatrix out;
  out.measure = measure;
  out.combination = combination_of(measure);
  out.values = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  out.signed_values = out.values;
  std::vector<unsigned char> degenerate(n * n, 0);

  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t a = begin; a < end; ++a) {
      const AtomSeries sa = s.atom(a);
      for (std::size_t b = a + 1; b < n; ++b) {
        const AtomSeries sb = s.atom(b);
        double unsigned_value = 0.0;
        Correlation c;
        if (out.combination == Combination::axis_mean) {
          const auto scalar = measure == Measure::xyz_pearson    ? ScalarMeasure::pearson
                              : measure == Measure::xyz_spearman ? ScalarMeasure::spearman
                                                                 : ScalarMeasure::bicor;
          const Correlation cx = correlate(scalar, sa.x, sb.x);
          const Correlation cy = correlate(scalar, sa.y, sb.y);
          const Correlation cz = correlate(scalar, sa.z, sb.z);
          c = {(cx.value + cy.value + cz.value) / 3.0, cx.degenerate || cy.degenerate || cz.degenerate};
          unsigned_value = (std::abs(cx.value) + std::abs(cy.value) + std::abs(cz.value)) / 3.0;
        } else {
          c = signed_score(measure, sa, sb);
          unsigned_value = std::abs(c.value);
        }
        const auto ia = static_cast<Eigen::Index>(a);
        const auto ib = static_cast<Eigen::Index>(b);
        out.values(ia, ib) = out.values(ib, ia) = std::clamp(unsigned_value, 0.0, 1.0);
        out.signed_values(ia, ib) = out.signed_values(ib, ia) = c.value;
        degenerate[a * n + b] = c.degenerate ? 1 : 0;
      }
    }
  });
  out.degenerate_pairs = static_cast<std::size_t>(std::count(degenerate.begin(), degenerate.end(), 1));
  return out;
}

std::string matrix_csv(const Eigen::MatrixXd& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

std::size_t sequence_gap(const std::vector<AtomLabel>& labels, std::size_t a, std::size_t b) {
  if (a >= labels.size() || b >= labels.size()) throw std::out_of_range("atom index out of range");
  const auto& la = labels[a];
  const auto& lb = labels[b];
  if (la.seq && lb.seq) {
    if (la.chain != lb.chain) return std::numeric_limits<std::size_t>::max();
    return static_cast<std::size_t>(std::abs(static_cast<long>(*la.seq) - static_cast<long>(*lb.seq)));
  }
  return a > b ? a - b : b - a;
}

std::string_view to_string(GraphMode m) { return m == GraphMode::hard ? "hard" : "soft"; }

AtomGraph hard_threshold(const SimilarityMatrix& s, const std::vector<AtomLabel>& labels, double tau,
                         std::size_t min_seq_gap) {
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("hard_threshold: tau must lie in (0, 1)");
  if (labels.size() != s.size()) throw std::invalid_argument("hard_threshold: label count differs from matrix");
  AtomGraph g;
  g.nodes = labels;
  g.mode = GraphMode::hard;
  g.tau = tau;
  g.min_seq_gap = min_seq_gap;
  for (std::size_t a = 0; a < s.size(); ++a) {
    for (std::size_t b = a + 1; b < s.size(); ++b) {
      const double w = s.values(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      if (w >= tau && sequence_gap(labels, a, b) > min_seq_gap) g.edges.push_back({a, b, w});
    }
  }
  return g;
}

AtomGraph soft_threshold(const SimilarityMatrix& s, const std::vector<AtomLabel>& labels, double beta) {
  if (!(beta >= 1.0)) throw std::invalid_argument("soft_threshold: beta must be >= 1");
  if (labels.size() != s.size()) throw std::invalid_argument("soft_threshold: label count differs from matrix");
  AtomGraph g;
  g.nodes = labels;
  g.mode = GraphMode::soft;
  g.beta = beta;
  for (std::size_t a = 0; a < s.size(); ++a) {
    for (std::size_t b = a + 1; b < s.size(); ++b) {
      const double w = std::pow(s.values(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)), beta);
      if (w > 0.0) g.edges.push_back({a, b, w});
    }
  }
  return g;
}

double pick_threshold(const SimilarityMatrix& s, double q) {
  if (s.size() < 2) throw std::invalid_argument("pick_threshold needs at least two atoms");
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("pick_threshold: quantile must lie in (0, 1)");
  std::vector<double> upper;
  upper.reserve(s.size() * (s.size() - 1) / 2);
  for (std::size_t a = 0; a < s.size(); ++a) {
    for (std::size_t b = a + 1; b < s.size(); ++b) {
      upper.push_back(s.values(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)));
    }
  }
  std::sort(upper.begin(), upper.end());
  const double pos = q * static_cast<double>(upper.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, upper.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return upper[lo] + frac * (upper[hi] - upper[lo]);
}

}  // namespace confsom
