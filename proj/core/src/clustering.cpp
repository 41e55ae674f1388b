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

#include "confsom/clustering.hpp"

#include "confsom/format.hpp"
#include "confsom/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace confsom {

std::vector<double> Dendrogram::heights() const {
  std::vector<double> h;
  h.reserve(merges.size());
  for (const auto& m : merges) h.push_back(m.height);
  return h;
}

Dendrogram complete_linkage(const CoordMatrix& points) {
  const auto m = static_cast<std::size_t>(points.rows());
  if (m < 2) throw std::invalid_argument("complete_linkage needs at least two points");
  if (!points.allFinite()) throw NumericError("complete_linkage: non-finite input");

  std::vector<double> dist(m * m, 0.0);
  parallel_for(m, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        dist[i * m + j] = (points.row(static_cast<Eigen::Index>(i)) - points.row(static_cast<Eigen::Index>(j))).norm();
      }
    }
  });

  // Slot s holds an active cluster with node id node[s]; distances are kept
  // per slot and updated with max() (complete linkage).
  std::vector<std::size_t> node(m);
  std::iota(node.begin(), node.end(), 0);
  std::vector<bool> active(m, true);

  Dendrogram d;
  d.leaves = m;
  d.merges.reserve(m - 1);
  for (std::size_t step = 0; step + 1 < m; ++step) {
    std::size_t best_a = 0, best_b = 0;
    std::size_t best_lo = 0, best_hi = 0;
    double best = std::numeric_limits<double>::infinity();
    bool found = false;
    for (std::size_t a = 0; a < m; ++a) {
      if (!active[a]) continue;
      for (std::size_t b = a + 1; b < m; ++b) {
        if (!active[b]) continue;
        const double dab = dist[a * m + b];
        const std::size_t lo = std::min(node[a], node[b]);
        const std::size_t hi = std::max(node[a], node[b]);
        if (!found || dab < best || (dab == best && (lo < best_lo || (lo == best_lo && hi < best_hi)))) {
          found = true;
          best = dab;
          best_a = a;
          best_b = b;
          best_lo = lo;
          best_hi = hi;
        }
      }
    }
    d.merges.push_back({best_lo, best_hi, best});
    for (std::size_t c = 0; c < m; ++c) {
      if (!active[c] || c == best_a || c == best_b) continue;
      const double merged = std::max(dist[best_a * m + c], dist[best_b * m + c]);
      dist[best_a * m + c] = dist[c * m + best_a] = merged;
    }
    active[best_b] = false;
    node[best_a] = m + step;
  }
  return d;
}

MojenaCut mojena_cut(const Dendrogram& d, double k_const, Warnings* warnings) {
  if (!(k_const > 0.0)) throw std::invalid_argument("mojena_cut: k_const must be positive");
  MojenaCut cut;
  cut.k_const = k_const;
  const std::size_t m = d.leaves;
  if (m < 3) {
    cut.clusters = m;
    cut.undefined = true;
    warn(warnings, "Mojena rule undefined for fewer than 3 neurons; keeping every neuron as a cluster");
    return cut;
  }
  const auto h = d.heights();
  const double n = static_cast<double>(h.size());
  double sum = 0.0;
  for (double v : h) sum += v;
  cut.mean = sum / n;
  double ss = 0.0;
  for (double v : h) ss += (v - cut.mean) * (v - cut.mean);
  cut.sd = std::sqrt(ss / (n - 1.0));
  cut.threshold = cut.mean + k_const * cut.sd;

  // h[j] is a_{j+1} for j >= 1.
  for (std::size_t j = 1; j < h.size(); ++j) {
    if (h[j] > cut.threshold) {
      cut.clusters = m - j;
      return cut;
    }
  }
  cut.clusters = 2;
  cut.fallback = true;
  warn(warnings, "Mojena rule never triggered; falling back to 2 clusters");
  return cut;
}

std::vector<std::size_t> MapPartition::members(std::size_t cluster) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < cluster_of.size(); ++i) {
    if (cluster_of[i] == cluster) out.push_back(i);
  }
  return out;
}

MapPartition cut_dendrogram(const Dendrogram& d, std::size_t k) {
  const std::size_t m = d.leaves;
  if (k < 1 || k > m) throw std::out_of_range("cut_dendrogram: cluster count out of range");

  // Union-find over all 2M-1 nodes; apply the first M - K merges.
  std::vector<std::size_t> parent(2 * m - 1);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t j = 0; j < m - k; ++j) {
    const auto& mg = d.merges[j];
    parent[find(mg.left)] = m + j;
    parent[find(mg.right)] = m + j;
  }

  MapPartition p;
  p.cluster_of.assign(m, 0);
  std::vector<std::size_t> id_of_root(2 * m - 1, std::numeric_limits<std::size_t>::max());
  for (std::size_t leaf = 0; leaf < m; ++leaf) {
    const std::size_t root = find(leaf);
    if (id_of_root[root] == std::numeric_limits<std::size_t>::max()) id_of_root[root] = p.clusters++;
    p.cluster_of[leaf] = id_of_root[root];
  }
  return p;
}

std::vector<ClusterSummary> cluster_summaries(const MapPartition& p, const SomMap& map, const Ensemble& e,
                                              const Assignment& a) {
  if (p.cluster_of.size() != map.size()) throw std::invalid_argument("partition size differs from map size");
  if (map.dim() != e.dim()) throw DimensionError("ensemble dimension does not match map");
  if (a.bmu.size() != e.frames()) throw std::invalid_argument("assignment was not computed on this ensemble");

  std::vector<ClusterSummary> out(p.clusters);
  for (std::size_t k = 0; k < p.clusters; ++k) {
    auto& s = out[k];
    s.cluster = k;
    s.neurons = p.members(k);
    s.centroid = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(map.dim()));
    for (std::size_t i : s.neurons) s.centroid += map.prototype(i);
    s.centroid /= static_cast<double>(s.neurons.size());
  }
  for (std::size_t f = 0; f < e.frames(); ++f) ++out[p.cluster_of[a.bmu[f]]].won_frames;

  for (auto& s : out) {
    s.searched_all_frames = s.won_frames == 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < e.frames(); ++f) {
      if (!s.searched_all_frames && p.cluster_of[a.bmu[f]] != s.cluster) continue;
      const double d2 = (e.frame(f) - s.centroid).squaredNorm();
      if (d2 < best) {
        best = d2;
        s.representative_frame = f;
      }
    }
    s.representative_distance = std::sqrt(best);
  }
  return out;
}

std::string dendrogram_csv(const Dendrogram& d) {
  std::string out = "left,right,height\n";
  for (const auto& m : d.merges) {
    out += std::to_string(m.left) + "," + std::to_string(m.right) + "," + format_double(m.height) + "\n";
  }
  return out;
}

}  // namespace confsom
