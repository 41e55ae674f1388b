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

#include "confsom/communities.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace confsom {

namespace {

// Relabels to contiguous ids ordered by the lowest member node.
std::size_t relabel(std::vector<std::size_t>& labels) {
  std::map<std::size_t, std::size_t> ids;
  for (auto& l : labels) {
    const auto [it, inserted] = ids.emplace(l, ids.size());
    l = it->second;
  }
  return ids.size();
}

}  // namespace

CommunityPartition connected_components(const AtomGraph& g) {
  const std::size_t n = g.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : g.edges) {
    const auto ra = find(e.a);
    const auto rb = find(e.b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  CommunityPartition p;
  p.method = "connected_components";
  p.community_of.resize(n);
  for (std::size_t i = 0; i < n; ++i) p.community_of[i] = find(i);
  p.communities = relabel(p.community_of);
  if (!g.edges.empty()) p.q = modularity(g, p.community_of);
  return p;
}

double modularity(const AtomGraph& g, const std::vector<std::size_t>& community_of) {
  if (community_of.size() != g.size()) throw std::invalid_argument("modularity: partition size differs from graph");
  double m = 0.0;
  for (const auto& e : g.edges) m += e.weight;
  if (g.edges.empty() || !(m > 0.0)) throw std::domain_error("modularity undefined for an edgeless graph");

  std::map<std::size_t, double> internal;  // intra-community weight per community
  std::map<std::size_t, double> degree;    // summed weighted degree per community
  for (const auto& e : g.edges) {
    degree[community_of[e.a]] += e.weight;
    degree[community_of[e.b]] += e.weight;
    if (community_of[e.a] == community_of[e.b]) internal[community_of[e.a]] += e.weight;
  }
  double q = 0.0;
  for (const auto& [c, d] : degree) {
    const auto it = internal.find(c);
    const double in = it == internal.end() ? 0.0 : it->second;
    q += in / m - (d / (2.0 * m)) * (d / (2.0 * m));
  }
  return q;
}

CommunityPartition greedy_modularity(const AtomGraph& g) {
  const std::size_t n = g.size();
  double m = 0.0;
  for (const auto& e : g.edges) m += e.weight;
  if (g.edges.empty() || !(m > 0.0)) throw std::domain_error("greedy_modularity needs at least one edge");

  // e_ij: fraction of edge ends between communities i != j (symmetric);
  // a_i: fraction of edge ends attached to community i.
  std::vector<std::map<std::size_t, double>> link(n);
  std::vector<double> frac(n, 0.0);
  for (const auto& e : g.edges) {
    const double w = e.weight / (2.0 * m);
    frac[e.a] += w;
    frac[e.b] += w;
    if (e.a != e.b) {
      link[e.a][e.b] += w;
      link[e.b][e.a] += w;
    }
  }
  std::vector<std::size_t> owner(n);
  std::iota(owner.begin(), owner.end(), 0);
  std::vector<bool> alive(n, true);

  while (true) {
    double best = -std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!alive[i]) continue;
      for (const auto& [j, eij] : link[i]) {
        if (j <= i) continue;
        const double gain = 2.0 * (eij - frac[i] * frac[j]);
        if (gain > best) {
          best = gain;
          bi = i;
          bj = j;
        }
      }
    }
    if (!(best > 1e-12)) break;

    // Fold community bj into bi.
    for (const auto& [k, w] : link[bj]) {
      if (k == bi) continue;
      link[bi][k] += w;
      link[k][bi] += w;
      link[k].erase(bj);
    }
    link[bi].erase(bj);
    link[bj].clear();
    frac[bi] += frac[bj];
    frac[bj] = 0.0;
    alive[bj] = false;
    for (auto& o : owner) {
      if (o == bj) o = bi;
    }
  }

  CommunityPartition p;
  p.method = "greedy_modularity";
  p.community_of = owner;
  p.communities = relabel(p.community_of);
  p.q = modularity(g, p.community_of);
  return p;
}

std::string_view to_string(EdgeKind k) { return k == EdgeKind::local ? "local" : "long_range"; }

std::size_t EdgeClass::long_range_count() const {
  return static_cast<std::size_t>(std::count(kind.begin(), kind.end(), EdgeKind::long_range));
}

EdgeClass classify_edges(const AtomGraph& g, std::size_t seq_gap, const Ensemble& e,
                         const std::vector<std::size_t>& frames_used, Warnings* warnings) {
  if (g.size() != e.atoms()) throw std::invalid_argument("classify_edges: graph and ensemble atom counts differ");
  EdgeClass out;
  out.seq_gap = seq_gap;
  out.index_gap_fallback = !std::all_of(g.nodes.begin(), g.nodes.end(), [](const AtomLabel& l) { return l.seq.has_value(); });
  if (out.index_gap_fallback && !g.edges.empty()) {
    warn(warnings, "classify_edges: residue numbers missing; using node-index gap");
  }
  out.kind.reserve(g.edges.size());
  out.mean_distance.reserve(g.edges.size());
  for (const auto& edge : g.edges) {
    out.kind.push_back(sequence_gap(g.nodes, edge.a, edge.b) > seq_gap ? EdgeKind::long_range : EdgeKind::local);
    double total = 0.0;
    for (std::size_t f : frames_used) total += (e.position(f, edge.a) - e.position(f, edge.b)).norm();
    out.mean_distance.push_back(frames_used.empty() ? 0.0 : total / static_cast<double>(frames_used.size()));
  }
  return out;
}

std::vector<HubAtom> hub_atoms(const AtomGraph& g, std::size_t top_k) {
  std::vector<double> degree(g.size(), 0.0);
  for (const auto& e : g.edges) {
    degree[e.a] += e.weight;
    degree[e.b] += e.weight;
  }
  std::vector<HubAtom> hubs;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (degree[i] > 0.0) hubs.push_back({i, degree[i]});
  }
  std::stable_sort(hubs.begin(), hubs.end(), [](const HubAtom& a, const HubAtom& b) { return a.degree > b.degree; });
  if (hubs.size() > top_k) hubs.resize(top_k);
  return hubs;
}

}  // namespace confsom
