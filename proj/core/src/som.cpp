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

#include "confsom/som.hpp"

#include "confsom/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace confsom {

namespace {

constexpr double kSqrt3Over2 = 0.86602540378443864676;

struct Nearest {
  std::size_t index = 0;
  double dist2 = std::numeric_limits<double>::infinity();
};

Nearest nearest(const CoordMatrix& prototypes, const Eigen::Ref<const Eigen::RowVectorXd>& x) {
  Nearest best;
  for (Eigen::Index i = 0; i < prototypes.rows(); ++i) {
    const double d2 = (prototypes.row(i) - x).squaredNorm();
    if (d2 < best.dist2) best = {static_cast<std::size_t>(i), d2};
  }
  return best;
}

void check_dims(const SomMap& map, const Ensemble& e) {
  if (map.dim() != e.dim()) {
    throw DimensionError("ensemble dimension " + std::to_string(e.dim()) + " (" + std::to_string(e.atoms()) +
                         " atoms) does not match map dimension " + std::to_string(map.dim()));
  }
}

// Training-time checks; looser than TrainingConfig::validate so that small
// hand-built maps and alpha0 = 0 can be exercised directly.
void check_schedule(const TrainingConfig& cfg) {
  if (cfg.train_len < 1) throw std::invalid_argument("train_len must be >= 1");
  if (!(cfg.radius_final > 0.0) || !(cfg.radius0 >= cfg.radius_final)) {
    throw std::invalid_argument("radius schedule needs radius0 >= radius_final > 0");
  }
  if (!(cfg.alpha0 >= 0.0 && cfg.alpha0 <= 1.0)) throw std::invalid_argument("alpha0 must lie in [0, 1]");
}

double linear_schedule(double from, double to, std::size_t step, std::size_t steps) {
  if (steps <= 1) return from;
  return from + (to - from) * static_cast<double>(step) / static_cast<double>(steps - 1);
}

// Canonical eigenvector sign: largest-magnitude component positive.
void canonical_sign(Eigen::VectorXd& v) {
  Eigen::Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (v(arg) < 0.0) v = -v;
}

struct PrincipalPlane {
  Eigen::VectorXd dir1, dir2;
  double sd1 = 0.0, sd2 = 0.0;
};

// Top two principal directions of the centred data; nullopt-like false when
// fewer than two directions carry variance.
bool principal_plane(const CoordMatrix& centered, PrincipalPlane& out) {
  const Eigen::Index f = centered.rows();
  const Eigen::Index d = centered.cols();
  if (f < 2 || d < 2) return false;
  const double denom = static_cast<double>(f - 1);

  Eigen::VectorXd evals;
  Eigen::MatrixXd evecs;
  if (f <= d) {
    // Gram route: X X^T shares its nonzero spectrum with X^T X.
    const Eigen::MatrixXd gram = centered * centered.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    evals = eig.eigenvalues();
    evecs = eig.eigenvectors();
  } else {
    const Eigen::MatrixXd cov = centered.transpose() * centered;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    evals = eig.eigenvalues();
    evecs = eig.eigenvectors();
  }
  const Eigen::Index n = evals.size();
  const double l1 = evals(n - 1);
  const double l2 = evals(n - 2);
  if (!(l1 > 0.0) || !(l2 > 1e-10 * l1)) return false;

  auto direction = [&](Eigen::Index k, double lambda) {
    Eigen::VectorXd v = evecs.col(k);
    if (f <= d) v = centered.transpose() * v / std::sqrt(lambda);
    v.normalize();
    canonical_sign(v);
    return v;
  };
  out.dir1 = direction(n - 1, l1);
  out.dir2 = direction(n - 2, l2);
  out.sd1 = std::sqrt(l1 / denom);
  out.sd2 = std::sqrt(l2 / denom);
  return true;
}

CoordMatrix random_prototypes(const Ensemble& e, const HexGrid& grid, std::uint64_t seed) {
  const Eigen::RowVectorXd lo = e.coords().colwise().minCoeff();
  const Eigen::RowVectorXd hi = e.coords().colwise().maxCoeff();
  std::mt19937_64 rng(seed);
  CoordMatrix p(static_cast<Eigen::Index>(grid.size()), static_cast<Eigen::Index>(e.dim()));
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index c = 0; c < p.cols(); ++c) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      p(i, c) = lo(c) + (hi(c) - lo(c)) * u;
    }
  }
  return p;
}

}  // namespace

HexGrid::HexGrid(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("hex grid needs positive rows and cols");
}

HexGrid HexGrid::for_size(std::size_t m) {
  if (m == 0) throw std::invalid_argument("map size must be positive");
  std::size_t rows = static_cast<std::size_t>(std::sqrt(static_cast<double>(m)));
  while (rows > 1 && m % rows != 0) --rows;
  return HexGrid(rows, m / rows);
}

Eigen::Vector2d HexGrid::position(std::size_t neuron) const {
  if (neuron >= size()) throw std::out_of_range("neuron index out of range");
  const std::size_t r = neuron / cols_;
  const std::size_t c = neuron % cols_;
  return {static_cast<double>(c) + 0.5 * static_cast<double>(r % 2), static_cast<double>(r) * kSqrt3Over2};
}

double HexGrid::distance(std::size_t i, std::size_t j) const {
  if (i >= size() || j >= size()) throw std::out_of_range("neuron index out of range");
  if (i == j) return 0.0;
  return (position(i) - position(j)).norm();
}

double grid_distance(const HexGrid& grid, std::size_t i, std::size_t j) { return grid.distance(i, j); }

double neighborhood(double d, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("neighborhood: sigma must be positive");
  if (!(d >= 0.0)) throw std::invalid_argument("neighborhood: distance must be non-negative");
  return std::exp(-(d * d) / (2.0 * sigma * sigma));
}

std::string_view to_string(TrainingMode m) { return m == TrainingMode::batch ? "batch" : "sequential"; }
std::string_view to_string(InitMethod m) { return m == InitMethod::linear ? "linear" : "random"; }

TrainingMode parse_training_mode(std::string_view s) {
  if (s == "batch") return TrainingMode::batch;
  if (s == "sequential") return TrainingMode::sequential;
  throw ConfigError("unknown training mode '" + std::string(s) + "'");
}

InitMethod parse_init_method(std::string_view s) {
  if (s == "linear") return InitMethod::linear;
  if (s == "random") return InitMethod::random;
  throw ConfigError("unknown init method '" + std::string(s) + "'");
}

void TrainingConfig::validate() const {
  if (map_size < 4) throw ConfigError("map_size must be >= 4");
  if (train_len < 1) throw ConfigError("train_len must be >= 1");
  if (!(radius_final > 0.0)) throw ConfigError("radius_final must be > 0");
  if (!(radius0 >= radius_final)) throw ConfigError("radius0 must be >= radius_final");
  if (!(alpha0 > 0.0 && alpha0 <= 1.0)) throw ConfigError("alpha0 must lie in (0, 1]");
}

SomMap::SomMap(HexGrid grid, CoordMatrix prototypes, TrainingConfig config, bool trained)
    : grid_(grid), prototypes_(std::move(prototypes)), config_(config), trained_(trained) {
  if (static_cast<std::size_t>(prototypes_.rows()) != grid_.size()) {
    throw std::invalid_argument("prototype rows differ from grid size");
  }
  if (prototypes_.cols() < 1) throw std::invalid_argument("prototypes need at least one dimension");
  if (!prototypes_.allFinite()) throw NumericError("non-finite prototype entry");
  const std::size_t m = grid_.size();
  grid_distances_.resize(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) grid_distances_[i * m + j] = grid_.distance(i, j);
  }
}

std::size_t bmu(const Eigen::Ref<const Eigen::RowVectorXd>& x, const SomMap& map) {
  if (static_cast<std::size_t>(x.size()) != map.dim()) {
    throw DimensionError("vector dimension " + std::to_string(x.size()) + " does not match map dimension " +
                         std::to_string(map.dim()));
  }
  return nearest(map.prototypes(), x).index;
}

SomMap init_map(const Ensemble& e, const TrainingConfig& cfg, Warnings* warnings) {
  const HexGrid grid = HexGrid::for_size(cfg.map_size);
  if (cfg.init == InitMethod::random) return SomMap(grid, random_prototypes(e, grid, cfg.seed), cfg);

  const Eigen::RowVectorXd mean = e.coords().colwise().mean();
  const CoordMatrix centered = e.coords().rowwise() - mean;
  PrincipalPlane plane;
  if (!principal_plane(centered, plane)) {
    warn(warnings, "linear init: fewer than two principal directions carry variance; using random init");
    return SomMap(grid, random_prototypes(e, grid, cfg.seed), cfg);
  }

  // Grid coordinates normalised to [-1, 1]; the wider lattice axis follows
  // the leading principal direction.
  std::vector<Eigen::Vector2d> pos(grid.size());
  Eigen::Vector2d lo = Eigen::Vector2d::Constant(std::numeric_limits<double>::infinity());
  Eigen::Vector2d hi = -lo;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    pos[i] = grid.position(i);
    lo = lo.cwiseMin(pos[i]);
    hi = hi.cwiseMax(pos[i]);
  }
  const Eigen::Vector2d center = (lo + hi) / 2.0;
  const Eigen::Vector2d half = (hi - lo) / 2.0;
  const bool x_major = half.x() >= half.y();

  CoordMatrix p(static_cast<Eigen::Index>(grid.size()), static_cast<Eigen::Index>(e.dim()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    Eigen::Vector2d u = Eigen::Vector2d::Zero();
    for (int k = 0; k < 2; ++k) {
      if (half(k) > 0.0) u(k) = (pos[i](k) - center(k)) / half(k);
    }
    const double a = x_major ? u.x() : u.y();
    const double b = x_major ? u.y() : u.x();
    p.row(static_cast<Eigen::Index>(i)) =
        mean + (a * plane.sd1) * plane.dir1.transpose() + (b * plane.sd2) * plane.dir2.transpose();
  }
  return SomMap(grid, std::move(p), cfg);
}

SomMap train_batch(const SomMap& map, const Ensemble& e, const TrainingConfig& cfg) {
  check_schedule(cfg);
  check_dims(map, e);

  const std::size_t m = map.size();
  const std::size_t frames = e.frames();
  const auto& dist = map.grid_distances();
  CoordMatrix proto = map.prototypes();
  std::vector<std::size_t> winner(frames);
  CoordMatrix sums(static_cast<Eigen::Index>(m), proto.cols());
  std::vector<double> counts(m);
  std::vector<double> h(m * m);

  for (std::size_t epoch = 0; epoch < cfg.train_len; ++epoch) {
    const double sigma = linear_schedule(cfg.radius0, cfg.radius_final, epoch, cfg.train_len);

    parallel_for(frames, [&](std::size_t begin, std::size_t end) {
      for (std::size_t f = begin; f < end; ++f) winner[f] = nearest(proto, e.frame(f)).index;
    });

    // Per-winner sums accumulated in frame order.
    sums.setZero();
    std::fill(counts.begin(), counts.end(), 0.0);
    for (std::size_t f = 0; f < frames; ++f) {
      sums.row(static_cast<Eigen::Index>(winner[f])) += e.frame(f);
      counts[winner[f]] += 1.0;
    }
    for (std::size_t k = 0; k < m * m; ++k) h[k] = neighborhood(dist[k], sigma);

    parallel_for(m, [&](std::size_t begin, std::size_t end) {
      Eigen::RowVectorXd num(proto.cols());
      for (std::size_t i = begin; i < end; ++i) {
        num.setZero();
        double den = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
          if (counts[j] == 0.0) continue;
          const double w = h[j * m + i];
          num += w * sums.row(static_cast<Eigen::Index>(j));
          den += w * counts[j];
        }
        if (den >= 1e-12) proto.row(static_cast<Eigen::Index>(i)) = num / den;
      }
    });
  }
  if (!proto.allFinite()) throw NumericError("batch training produced non-finite prototypes");
  return SomMap(map.grid(), std::move(proto), cfg, true);
}

SomMap train_sequential(const SomMap& map, const Ensemble& e, const TrainingConfig& cfg) {
  check_schedule(cfg);
  check_dims(map, e);

  const std::size_t m = map.size();
  const std::size_t frames = e.frames();
  const std::size_t steps = cfg.train_len * frames;
  const auto& dist = map.grid_distances();
  CoordMatrix proto = map.prototypes();

  for (std::size_t s = 0; s < steps; ++s) {
    const auto x = e.frame(s % frames);
    const double alpha = cfg.alpha0 * (1.0 - static_cast<double>(s) / static_cast<double>(steps));
    const double sigma = linear_schedule(cfg.radius0, cfg.radius_final, s, steps);
    const std::size_t c = nearest(proto, x).index;
    for (std::size_t i = 0; i < m; ++i) {
      const double rate = alpha * neighborhood(dist[c * m + i], sigma);
      if (rate == 0.0) continue;
      auto row = proto.row(static_cast<Eigen::Index>(i));
      row += rate * (x - row);
    }
  }
  if (!proto.allFinite()) throw NumericError("sequential training produced non-finite prototypes");
  return SomMap(map.grid(), std::move(proto), cfg, true);
}

SomMap train(const SomMap& map, const Ensemble& e, const TrainingConfig& cfg) {
  return cfg.mode == TrainingMode::batch ? train_batch(map, e, cfg) : train_sequential(map, e, cfg);
}

std::vector<std::size_t> Assignment::frames_of(std::size_t neuron) const {
  std::vector<std::size_t> out;
  for (std::size_t f = 0; f < bmu.size(); ++f) {
    if (bmu[f] == neuron) out.push_back(f);
  }
  return out;
}

Assignment map_ensemble(const SomMap& map, const Ensemble& e) {
  check_dims(map, e);
  const std::size_t frames = e.frames();
  Assignment a;
  a.bmu.resize(frames);
  a.hits.assign(map.size(), 0);
  std::vector<double> err(frames);
  parallel_for(frames, [&](std::size_t begin, std::size_t end) {
    for (std::size_t f = begin; f < end; ++f) {
      const Nearest n = nearest(map.prototypes(), e.frame(f));
      a.bmu[f] = n.index;
      err[f] = std::sqrt(n.dist2);
    }
  });
  double total = 0.0;
  for (std::size_t f = 0; f < frames; ++f) {
    ++a.hits[a.bmu[f]];
    total += err[f];
  }
  a.qe = total / static_cast<double>(frames);
  return a;
}

double topographic_error(const SomMap& map, const Ensemble& e) {
  check_dims(map, e);
  if (map.size() < 2) throw std::invalid_argument("topographic_error needs at least two neurons");
  const auto& proto = map.prototypes();
  const std::size_t frames = e.frames();
  std::vector<unsigned char> bad(frames, 0);
  parallel_for(frames, [&](std::size_t begin, std::size_t end) {
    for (std::size_t f = begin; f < end; ++f) {
      const auto x = e.frame(f);
      Nearest first, second;
      for (Eigen::Index i = 0; i < proto.rows(); ++i) {
        const double d2 = (proto.row(i) - x).squaredNorm();
        if (d2 < first.dist2) {
          second = first;
          first = {static_cast<std::size_t>(i), d2};
        } else if (d2 < second.dist2) {
          second = {static_cast<std::size_t>(i), d2};
        }
      }
      bad[f] = map.grid().distance(first.index, second.index) > 1.0 + 1e-9 ? 1 : 0;
    }
  });
  const auto count = std::count(bad.begin(), bad.end(), static_cast<unsigned char>(1));
  return static_cast<double>(count) / static_cast<double>(frames);
}

}  // namespace confsom
