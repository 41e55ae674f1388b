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

#include "oracles.hpp"
#include "synthetic.hpp"

#include <doctest.h>

#include <array>
#include <random>

using namespace confsom;
using V = std::vector<double>;

namespace {

// atoms x 3 axes x frames, laid out as AtomSeriesSet expects.
AtomSeriesSet series_of(const std::vector<std::array<V, 3>>& atoms) {
  const std::size_t n = atoms.front()[0].size();
  std::vector<double> data;
  for (const auto& a : atoms) {
    for (const auto& axis : a) data.insert(data.end(), axis.begin(), axis.end());
  }
  std::vector<std::size_t> frames(n);
  for (std::size_t f = 0; f < n; ++f) frames[f] = f;
  return AtomSeriesSet(0, frames, atoms.size(), data);
}

std::vector<std::array<V, 3>> noise_atoms(std::size_t atoms, std::size_t frames, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<std::array<V, 3>> out(atoms);
  for (auto& a : out) {
    for (auto& axis : a) {
      axis.resize(frames);
      for (double& x : axis) x = g(rng);
    }
  }
  return out;
}

V to_vec(std::span<const double> s) { return V(s.begin(), s.end()); }

SimilarityMatrix matrix_of(const Eigen::MatrixXd& m) {
  SimilarityMatrix s;
  s.values = m;
  s.signed_values = m;
  return s;
}

}  // namespace

TEST_SUITE("networks") {

TEST_CASE("gather_neuron_series") {
  CoordMatrix c(6, 6);
  for (Eigen::Index i = 0; i < c.size(); ++i) c.data()[i] = static_cast<double>(i);
  const Ensemble e(c, testing::residue_labels(2));
  Assignment a;
  a.bmu = {0, 0, 1, 0, 2, 1};
  a.hits = {3, 2, 1};
  const AtomSeriesSet s = gather_neuron_series(e, a, 0);
  CHECK(s.frames_used() == std::vector<std::size_t>{0, 1, 3});
  CHECK(s.atoms() == 2);
  CHECK(s.length() == 3);
  CHECK(to_vec(s.atom(1).y) == V{e.coords()(0, 4), e.coords()(1, 4), e.coords()(3, 4)});
  try {
    gather_neuron_series(e, a, 1);
    FAIL("expected InsufficientFrames");
  } catch (const InsufficientFrames& err) {
    CHECK(err.hits() == 2);
  }
}

TEST_CASE("neuron series partition the frames") {
  const Ensemble e = testing::three_cluster_ensemble(3, 40, 0.5, 2);
  TrainingConfig cfg;
  cfg.map_size = 9;
  cfg.train_len = 5;
  const SomMap map = train(init_map(e, cfg), e, cfg);
  const Assignment a = map_ensemble(map, e);
  std::vector<int> seen(e.frames(), 0);
  for (std::size_t n = 0; n < map.size(); ++n) {
    if (a.hits[n] >= 3) {
      const AtomSeriesSet set = gather_neuron_series(e, a, n);
      for (std::size_t f : set.frames_used()) ++seen[f];
    } else {
      CHECK_THROWS_AS(gather_neuron_series(e, a, n), InsufficientFrames);
      for (std::size_t f : a.frames_of(n)) ++seen[f];
    }
  }
  for (int v : seen) CHECK(v == 1);
}

TEST_CASE("cosine fluctuation similarity") {
  const V t{1, -2, 0.5, 3, -1};
  const auto same = series_of({{t, t, t}, {t, t, t}});
  CHECK(cosine_fluct(same.atom(0), same.atom(1)).value == doctest::Approx(1.0).epsilon(1e-14));
  V neg;
  for (double x : t) neg.push_back(-2.0 * x + 7.0);
  const auto mirrored = series_of({{t, t, t}, {neg, neg, neg}});
  CHECK(cosine_fluct(mirrored.atom(0), mirrored.atom(1)).value == doctest::Approx(1.0).epsilon(1e-14));

  const V zero{0, 0, 0, 0};
  const V p{1, -1, 1, -1};
  const V q{1, 1, -1, -1};
  const auto ortho = series_of({{p, zero, zero}, {zero, q, zero}});
  CHECK(cosine_fluct(ortho.atom(0), ortho.atom(1)).value == 0.0);
  const auto frozen = series_of({{zero, zero, zero}, {p, q, p}});
  CHECK(cosine_fluct(frozen.atom(0), frozen.atom(1)).degenerate);
}

TEST_CASE("per-axis and concatenated measures match oracles") {
  const auto atoms = noise_atoms(2, 25, 17);
  const auto s = series_of(atoms);
  for (int trial = 0; trial < 100; ++trial) {
    const auto raw = noise_atoms(2, 4 + trial % 30, 1000 + trial);
    const auto set = series_of(raw);
    const AtomSeries a = set.atom(0), b = set.atom(1);
    const auto& ra = raw[0];
    const auto& rb = raw[1];
    const double px = (std::abs(oracle::pearson(ra[0], rb[0])) + std::abs(oracle::pearson(ra[1], rb[1])) +
                       std::abs(oracle::pearson(ra[2], rb[2]))) / 3.0;
    CHECK(std::abs(xyz_avg_abs_corr(a, b, ScalarMeasure::pearson).value - px) <= 1e-12);
    const double sx = (std::abs(oracle::spearman(ra[0], rb[0])) + std::abs(oracle::spearman(ra[1], rb[1])) +
                       std::abs(oracle::spearman(ra[2], rb[2]))) / 3.0;
    CHECK(std::abs(xyz_avg_abs_corr(a, b, ScalarMeasure::spearman).value - sx) <= 1e-12);
    const double bx = (std::abs(oracle::bicor(ra[0], rb[0])) + std::abs(oracle::bicor(ra[1], rb[1])) +
                       std::abs(oracle::bicor(ra[2], rb[2]))) / 3.0;
    CHECK(std::abs(xyz_avg_abs_corr(a, b, ScalarMeasure::bicor).value - bx) <= 1e-12);
    CHECK(std::abs(cosine_fluct(a, b).value - oracle::cosine_fluct(ra[0], ra[1], ra[2], rb[0], rb[1], rb[2])) <=
          1e-12);

    V ca, cb;
    for (int k = 0; k < 3; ++k) {
      const V u = oracle::centered(ra[k]), v = oracle::centered(rb[k]);
      ca.insert(ca.end(), u.begin(), u.end());
      cb.insert(cb.end(), v.begin(), v.end());
    }
    CHECK(std::abs(concat_pearson(a, b).value - std::abs(oracle::pearson(ca, cb))) <= 1e-12);
  }
  CHECK(xyz_avg_abs_corr(s.atom(0), s.atom(0), ScalarMeasure::pearson).value == doctest::Approx(1.0));
}

TEST_CASE("per-axis sign flips leave xyz measures unchanged") {
  auto raw = noise_atoms(2, 30, 4);
  const auto before = series_of(raw);
  const double p0 = xyz_avg_abs_corr(before.atom(0), before.atom(1), ScalarMeasure::pearson).value;
  for (double& x : raw[1][1]) x = -x;
  const auto after = series_of(raw);
  CHECK(xyz_avg_abs_corr(after.atom(0), after.atom(1), ScalarMeasure::pearson).value ==
        doctest::Approx(p0).epsilon(1e-14));
}

TEST_CASE("similarity matrices are symmetric with unit diagonal") {
  const auto set = series_of(noise_atoms(7, 20, 8));
  for (Measure m : {Measure::xyz_pearson, Measure::xyz_spearman, Measure::xyz_bicor, Measure::cosine,
                    Measure::concat_pearson}) {
    const SimilarityMatrix s = similarity_matrix(set, m);
    CHECK(s.values == s.values.transpose());
    CHECK(s.signed_values == s.signed_values.transpose());
    CHECK(s.values.diagonal() == Eigen::VectorXd::Ones(7));
    CHECK(s.values.minCoeff() >= 0.0);
    CHECK(s.values.maxCoeff() <= 1.0);
    CHECK(s.combination == combination_of(m));
    CHECK(parse_measure(to_string(m)) == m);
  }
  const V t{1, 2, 4, 3};
  const SimilarityMatrix twins = similarity_matrix(series_of({{t, t, t}, {t, t, t}}), Measure::xyz_pearson);
  CHECK(twins.values == Eigen::Matrix2d::Ones());
}

TEST_CASE("independent fluctuations give weak similarity") {
  const auto set = series_of(noise_atoms(12, 500, 3));
  const SimilarityMatrix s = similarity_matrix(set, Measure::xyz_pearson);
  double total = 0.0;
  for (std::size_t a = 0; a < 12; ++a) {
    for (std::size_t b = a + 1; b < 12; ++b) total += s.values(a, b);
  }
  CHECK(total / 66.0 < 0.15);
}

TEST_CASE("sequence gaps") {
  std::vector<AtomLabel> labels = testing::residue_labels(4);
  labels[3].chain = "B";
  CHECK(sequence_gap(labels, 0, 2) == 2);
  CHECK(sequence_gap(labels, 0, 3) == std::numeric_limits<std::size_t>::max());
  std::vector<AtomLabel> synthetic(3);
  CHECK(sequence_gap(synthetic, 2, 0) == 2);
}

TEST_CASE("hard threshold") {
  Eigen::Matrix3d m;
  m << 1, .9, .1, .9, 1, .2, .1, .2, 1;
  const auto labels = testing::residue_labels(3);
  const AtomGraph g = hard_threshold(matrix_of(m), labels, 0.8);
  REQUIRE(g.edges.size() == 1);
  CHECK(g.edges[0].a == 0);
  CHECK(g.edges[0].b == 1);
  CHECK(g.edges[0].weight == 0.9);
  CHECK(hard_threshold(matrix_of(m), labels, 0.999).edges.empty());
  CHECK(hard_threshold(matrix_of(m), labels, 0.05, 1).edges.size() == 1);  // only (0, 2) is two residues apart
  CHECK_THROWS(hard_threshold(matrix_of(m), labels, 1.0));
  CHECK_THROWS(hard_threshold(matrix_of(m), labels, 0.0));

  const auto set = series_of(noise_atoms(15, 12, 21));
  const SimilarityMatrix s = similarity_matrix(set, Measure::cosine);
  const auto many = testing::residue_labels(15);
  std::size_t previous = std::numeric_limits<std::size_t>::max();
  for (double tau = 0.05; tau < 1.0; tau += 0.05) {
    std::size_t expect = 0;
    for (std::size_t a = 0; a < 15; ++a) {
      for (std::size_t b = a + 1; b < 15; ++b) {
        if (s.values(a, b) >= tau && b - a > 2) ++expect;
      }
    }
    const std::size_t got = hard_threshold(s, many, tau, 2).edges.size();
    CHECK(got == expect);
    CHECK(got <= previous);
    previous = got;
  }
}

TEST_CASE("soft threshold") {
  Eigen::Matrix3d m;
  m << 1, .5, .3, .5, 1, 0, .3, 0, 1;
  const auto labels = testing::residue_labels(3);
  const AtomGraph one = soft_threshold(matrix_of(m), labels, 1.0);
  REQUIRE(one.edges.size() == 2);
  CHECK(one.edges[0].weight == 0.5);
  CHECK(one.edges[1].weight == 0.3);
  const AtomGraph six = soft_threshold(matrix_of(m), labels, 6.0);
  CHECK(six.edges[0].weight == 0.015625);
  for (std::size_t k = 0; k < 2; ++k) CHECK(six.edges[k].weight <= one.edges[k].weight);
  CHECK_THROWS(soft_threshold(matrix_of(m), labels, 0.5));
}

TEST_CASE("pick_threshold") {
  CHECK(pick_threshold(matrix_of(Eigen::Matrix3d::Constant(0.4)), 0.7) == doctest::Approx(0.4));

  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(5, 5);
  const double upper[] = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.45};
  int k = 0;
  for (int a = 0; a < 5; ++a) {
    for (int b = a + 1; b < 5; ++b) m(a, b) = m(b, a) = upper[k++];
  }
  // Ten entries; the median of {0.1..0.9, 0.45} is 0.475.
  CHECK(pick_threshold(matrix_of(m), 0.5) == doctest::Approx(0.475).epsilon(1e-15));

  Eigen::Matrix3d nine_sorted;
  nine_sorted << 1, .1, .5, .1, 1, .9, .5, .9, 1;
  CHECK(pick_threshold(matrix_of(nine_sorted), 0.5) == doctest::Approx(0.5));

  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 10 + static_cast<std::size_t>(trial) * 3;
    Eigen::MatrixXd r = Eigen::MatrixXd::Identity(n, n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) r(a, b) = r(b, a) = u(rng);
    }
    for (double q : {0.5, 0.8, 0.9}) {
      const double tau = pick_threshold(matrix_of(r), q);
      const double pairs = static_cast<double>(n * (n - 1) / 2);
      const double density =
          static_cast<double>(hard_threshold(matrix_of(r), testing::residue_labels(n), tau).edges.size()) / pairs;
      CHECK(std::abs(density - (1.0 - q)) <= 2.0 / static_cast<double>(n * n));
    }
  }
}

TEST_CASE("matrix csv keeps full precision") {
  Eigen::Matrix2d m;
  m << 1, 0.1 + 0.2, 0.30000000000000004, 1;
  CHECK(matrix_csv(m) == "1,0.30000000000000004\n0.30000000000000004,1\n");
}

}  // TEST_SUITE
