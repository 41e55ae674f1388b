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

// Acceptance suite: runs every criterion at its stated tolerance and prints
// one PASS/FAIL line per criterion. Exit status is non-zero when any fails.

#include "confsom/clustering.hpp"
#include "confsom/communities.hpp"
#include "confsom/ensemble_io.hpp"
#include "confsom/networks.hpp"
#include "confsom/parallel.hpp"
#include "confsom/pipeline.hpp"
#include "confsom/similarity.hpp"
#include "confsom/som.hpp"

#include "oracles.hpp"
#include "synthetic.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>

using namespace confsom;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// Shared by criteria 1, 2 and 9: 30 atoms, 900 frames through three states.
const Ensemble& trajectory() {
  static const Ensemble e = testing::three_state_trajectory(30, 900, 0.1, 2026);
  return e;
}

const SomMap& default_map() {
  static const SomMap map = [] {
    TrainingConfig cfg;  // M = 100, sigma0 = 3, T = 5000 batch epochs
    return train(init_map(trajectory(), cfg), trajectory(), cfg);
  }();
  return map;
}

Outcome time_adjacency() {
  const Ensemble& e = trajectory();
  const SomMap& map = default_map();
  const Assignment a = map_ensemble(map, e);
  std::size_t adjacent = 0;
  for (std::size_t f = 1; f < e.frames(); ++f) {
    if (map.grid().distance(a.bmu[f - 1], a.bmu[f]) <= 1.0 + 1e-9) ++adjacent;
  }
  const double frac = static_cast<double>(adjacent) / static_cast<double>(e.frames() - 1);
  const double te = topographic_error(map, e);
  return {frac >= 0.70 && te <= 0.25, fmt("adjacent consecutive BMUs %.4f (>= 0.70), topographic error %.4f (<= 0.25)", frac, te)};
}

Outcome training_efficacy() {
  const Ensemble& e = trajectory();
  double worst = 0.0;
  bool pass = true;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    TrainingConfig cfg;
    cfg.seed = seed;
    cfg.init = InitMethod::random;
    const SomMap start = init_map(e, cfg);
    const double q0 = map_ensemble(start, e).qe;
    const double q1 = map_ensemble(train(start, e, cfg), e).qe;
    worst = std::max(worst, q1 / q0);
    pass = pass && q1 <= 0.5 * q0;
  }
  return {pass, fmt("worst final/random-init QE ratio over 10 seeds %.4f (<= 0.5)", worst)};
}

Outcome mojena_oracle() {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> len(5, 99);
  std::exponential_distribution<double> step(1.0);
  std::uniform_int_distribution<int> coin(0, 3);
  std::size_t agree = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> h(len(rng));
    double acc = 0.0;
    const bool integer_steps = coin(rng) == 0;  // produces tied heights
    for (double& v : h) v = acc += integer_steps ? std::floor(3.0 * step(rng)) : step(rng) * step(rng);
    Dendrogram d;
    d.leaves = h.size() + 1;
    for (std::size_t j = 0; j < h.size(); ++j) d.merges.push_back({j == 0 ? 0 : d.leaves + j - 1, j + 1, h[j]});
    if (mojena_cut(d).clusters == oracle::mojena_clusters(h, 1.25)) ++agree;
  }
  return {agree == 200, fmt("%.0f of 200 random height sequences match the arithmetic oracle", static_cast<double>(agree))};
}

Outcome linkage_oracle() {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    CoordMatrix pts(12, 6);
    oracle::Points raw(12, oracle::Vec(6));
    for (int i = 0; i < 12; ++i) {
      for (int c = 0; c < 6; ++c) raw[i][c] = pts(i, c) = 5.0 * g(rng);
    }
    const auto got = complete_linkage(pts).heights();
    const auto want = oracle::naive_complete_linkage_heights(raw);
    if (got.size() != want.size()) return {false, "merge count differs from the oracle"};
    for (std::size_t j = 0; j < got.size(); ++j) worst = std::max(worst, std::abs(got[j] - want[j]));
  }
  return {worst <= 1e-12, fmt("max |height - naive oracle| over 50 sets %.3g (<= 1e-12)", worst)};
}

Outcome similarity_oracles() {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_int_distribution<int> len(3, 80);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = len(rng);
    oracle::Vec u(n), v(n);
    std::array<oracle::Vec, 3> ax, bx;
    for (int i = 0; i < n; ++i) {
      u[i] = g(rng);
      v[i] = 0.5 * u[i] + g(rng);
    }
    std::vector<double> data;
    for (auto* axes : {&ax, &bx}) {
      for (auto& s : *axes) {
        s.resize(n);
        for (double& x : s) x = g(rng);
        data.insert(data.end(), s.begin(), s.end());
      }
    }
    std::vector<std::size_t> frames(n);
    for (int i = 0; i < n; ++i) frames[i] = i;
    const AtomSeriesSet set(0, frames, 2, data);
    worst = std::max(worst, std::abs(pearson(u, v).value - oracle::pearson(u, v)));
    worst = std::max(worst, std::abs(spearman(u, v).value - oracle::spearman(u, v)));
    const Correlation b = bicor(u, v);
    if (!b.degenerate) worst = std::max(worst, std::abs(b.value - oracle::bicor(u, v)));
    worst = std::max(worst, std::abs(cosine_fluct(set.atom(0), set.atom(1)).value -
                                     oracle::cosine_fluct(ax[0], ax[1], ax[2], bx[0], bx[1], bx[2])));
  }
  const oracle::Vec out{1, 2, 3, 4, 100}, line{1, 2, 3, 4, 5};
  const double gap = std::abs(bicor(out, line).value - pearson(out, line).value);
  const double fixture_err = std::abs(bicor(out, line).value - oracle::bicor(out, line));
  return {worst <= 1e-12 && fixture_err <= 1e-12 && gap > 0.05,
          fmt("max oracle deviation %.3g (<= 1e-12); outlier |bicor - pearson| %.4f (> 0.05); fixture error %.3g", worst,
              gap, fixture_err)};
}

AtomGraph graph_of(std::size_t n, std::vector<Edge> edges) {
  AtomGraph g;
  g.nodes = testing::residue_labels(n);
  g.edges = std::move(edges);
  return g;
}

Outcome modularity_fixture() {
  const AtomGraph tri =
      graph_of(6, {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}, {3, 5, 1}, {4, 5, 1}});
  const double q = modularity(tri, {0, 0, 0, 1, 1, 1});
  const double err = std::abs(q - 5.0 / 14.0);

  std::vector<Edge> edges;
  std::vector<oracle::WEdge> plain;
  for (std::size_t base : {0, 4}) {
    for (std::size_t a = 0; a < 4; ++a) {
      for (std::size_t b = a + 1; b < 4; ++b) edges.push_back({base + a, base + b, 1.0});
    }
  }
  edges.push_back({3, 4, 1.0});
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) { return std::pair(x.a, x.b) < std::pair(y.a, y.b); });
  for (const Edge& e : edges) plain.push_back({e.a, e.b, e.weight});
  const CommunityPartition p = greedy_modularity(graph_of(8, edges));
  const auto [best, best_q] = oracle::best_partition(8, plain);
  const bool planted = p.community_of == std::vector<std::size_t>{0, 0, 0, 0, 1, 1, 1, 1};
  return {err <= 1e-12 && planted && p.community_of == best,
          fmt("|Q - 5/14| = %.3g; greedy cliques planted=%.0f, exhaustive optimum Q=%.6f", err, planted ? 1.0 : 0.0,
              best_q)};
}

Outcome parser_round_trip() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-999.0, 9999.0);
  CoordMatrix c(100, 3 * 25);
  for (Eigen::Index i = 0; i < c.size(); ++i) c.data()[i] = u(rng);
  const Ensemble e(c, testing::residue_labels(25));
  double worst = 0.0;
  for (std::size_t f = 0; f < 100; ++f) {
    const Ensemble back = parse_pdb(write_pdb(e, f));
    worst = std::max(worst, (back.frame(0) - e.frame(f)).cwiseAbs().maxCoeff());
  }
  return {worst <= 0.001, fmt("max |coordinate change| over 100 frames %.5f A (<= 0.001)", worst)};
}

std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    files[fs::relative(entry.path(), root).string()] = s.str();
  }
  return files;
}

Outcome end_to_end() {
  const fs::path dir = fs::temp_directory_path() / "confsom_acceptance_e2e";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const Ensemble e = testing::three_state_trajectory(60, 1000, 0.1, 60);
  {
    std::ofstream out(dir / "traj.pdb", std::ios::binary);
    for (std::size_t f = 0; f < e.frames(); ++f) out << "MODEL     " << (f + 1) << "\n" << write_pdb(e, f) << "ENDMDL\n";
    out << "END\n";
  }

  const unsigned saved_threads = thread_count();
  double slowest = 0.0;
  std::vector<std::map<std::string, std::string>> outputs;
  for (unsigned threads : {1u, 4u}) {
    PipelineConfig cfg;
    cfg.input = (dir / "traj.pdb").string();
    cfg.out = (dir / ("out_t" + std::to_string(threads))).string();
    cfg.threads = threads;
    const auto t0 = std::chrono::steady_clock::now();
    run_pipeline(cfg);
    slowest = std::max(slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    outputs.push_back(snapshot(cfg.out));
  }
  set_thread_count(saved_threads);

  const auto& files = outputs[0];
  std::size_t graphml = 0, pdbs = 0;
  for (const auto& [name, bytes] : files) {
    if (name.ends_with(".graphml")) ++graphml;
    if (name.rfind("representatives/", 0) == 0 && name.ends_with(".pdb")) ++pdbs;
  }
  const RunReport report = read_report(files.count("report.json") ? files.at("report.json") : "{}");
  const std::size_t k = report.clustering ? report.clustering->clusters : 0;
  const bool artifacts = files.count("report.json") && files.count("som.svg") && graphml > 0 && pdbs == k;
  const bool identical = outputs[0] == outputs[1];
  return {slowest < 120.0 && artifacts && identical && k >= 2,
          fmt("slowest run %.1f s (< 120), K = %.0f (>= 2), byte-identical across threads {1,4}: ", slowest,
              static_cast<double>(k)) +
              (identical ? "yes" : "no") + ", " + std::to_string(graphml) + " GraphML, " + std::to_string(pdbs) +
              " representative PDBs"};
}

Outcome classification() {
  const Ensemble& e = trajectory();
  const SomMap& map = default_map();
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0.0, 0.01);
  CoordMatrix noisy = e.coords();
  for (Eigen::Index i = 0; i < noisy.size(); ++i) noisy.data()[i] += g(rng);
  const Assignment clean = map_ensemble(map, e);
  const Assignment perturbed = map_ensemble(map, Ensemble(noisy, e.labels()));
  std::size_t same = 0;
  for (std::size_t f = 0; f < e.frames(); ++f) same += clean.bmu[f] == perturbed.bmu[f] ? 1 : 0;
  const double frac = static_cast<double>(same) / static_cast<double>(e.frames());
  return {frac >= 0.95, fmt("BMU agreement under 0.01 A noise %.4f (>= 0.95)", frac)};
}

}  // namespace

int main() {
  // Results do not depend on the worker count; use every core for speed.
  set_thread_count(std::max(1u, std::thread::hardware_concurrency()));
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"time adjacency", time_adjacency},
      {"training efficacy", training_efficacy},
      {"mojena oracle", mojena_oracle},
      {"linkage oracle", linkage_oracle},
      {"similarity oracles", similarity_oracles},
      {"modularity fixture", modularity_fixture},
      {"parser round trip", parser_round_trip},
      {"end-to-end determinism and scale", end_to_end},
      {"classification under noise", classification},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& ex) {
      o = {false, std::string("threw: ") + ex.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %zu (%s): %s - %s [%.1f s]\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL",
                o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
