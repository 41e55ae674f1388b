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

#include "confsom/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace confsom {

namespace {

void check_pair(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw std::invalid_argument("correlation: length mismatch");
  if (u.size() < 3) throw std::invalid_argument("correlation: need at least 3 samples");
}

bool constant(std::span<const double> u) {
  const auto [lo, hi] = std::minmax_element(u.begin(), u.end());
  return *lo == *hi;
}

double clamp_unit(double r) { return std::clamp(r, -1.0, 1.0); }

double median(std::vector<double> x) {
  const std::size_t n = x.size();
  std::sort(x.begin(), x.end());
  return n % 2 == 1 ? x[n / 2] : 0.5 * (x[n / 2 - 1] + x[n / 2]);
}

std::vector<double> average_ranks(std::span<const double> u) {
  std::vector<std::size_t> order(u.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return u[a] < u[b]; });
  std::vector<double> ranks(u.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && u[order[j + 1]] == u[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

// Biweight-weighted deviations; empty when MAD is zero.
std::vector<double> biweight_terms(std::span<const double> u) {
  const std::vector<double> values(u.begin(), u.end());
  const double med = median(values);
  std::vector<double> dev(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) dev[i] = std::abs(u[i] - med);
  const double mad = median(dev);
  if (!(mad > 0.0)) return {};
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double t = (u[i] - med) / (9.0 * mad);
    const double w = std::abs(t) < 1.0 ? (1.0 - t * t) * (1.0 - t * t) : 0.0;
    out[i] = (u[i] - med) * w;
  }
  return out;
}

}  // namespace

Correlation pearson(std::span<const double> u, std::span<const double> v) {
  check_pair(u, v);
  if (constant(u) || constant(v)) return {0.0, true};
  const double n = static_cast<double>(u.size());
  const double mu = std::accumulate(u.begin(), u.end(), 0.0) / n;
  const double mv = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double suv = 0.0, suu = 0.0, svv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = u[i] - mu;
    const double b = v[i] - mv;
    suv += a * b;
    suu += a * a;
    svv += b * b;
  }
  if (!(suu > 0.0) || !(svv > 0.0)) return {0.0, true};
  return {clamp_unit(suv / std::sqrt(suu * svv)), false};
}

Correlation spearman(std::span<const double> u, std::span<const double> v) {
  check_pair(u, v);
  const auto ru = average_ranks(u);
  const auto rv = average_ranks(v);
  return pearson(ru, rv);
}

Correlation bicor(std::span<const double> u, std::span<const double> v) {
  check_pair(u, v);
  const auto a = biweight_terms(u);
  const auto b = biweight_terms(v);
  if (a.empty() || b.empty()) return {pearson(u, v).value, true};
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (!(aa > 0.0) || !(bb > 0.0)) return {pearson(u, v).value, true};
  return {clamp_unit(ab / (std::sqrt(aa) * std::sqrt(bb))), false};
}

Correlation correlate(ScalarMeasure m, std::span<const double> u, std::span<const double> v) {
  switch (m) {
    case ScalarMeasure::pearson: return pearson(u, v);
    case ScalarMeasure::spearman: return spearman(u, v);
    case ScalarMeasure::bicor: return bicor(u, v);
  }
  return pearson(u, v);
}

std::string_view to_string(ScalarMeasure m) {
  switch (m) {
    case ScalarMeasure::pearson: return "pearson";
    case ScalarMeasure::spearman: return "spearman";
    case ScalarMeasure::bicor: return "bicor";
  }
  return "pearson";
}

}  // namespace confsom
