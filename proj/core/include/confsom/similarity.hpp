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

#include <span>
#include <string_view>

namespace confsom {

/// A correlation value plus a flag raised when a degenerate input (zero
/// variance, zero MAD, zero norm) forced a fallback.
struct Correlation {
  double value = 0.0;
  bool degenerate = false;
};

// Scalar measures. All throw std::invalid_argument on unequal lengths or
// fewer than three samples.

/// Product-moment correlation; 0 + flag when either input is constant.
Correlation pearson(std::span<const double> u, std::span<const double> v);

/// Pearson correlation of average ranks.
Correlation spearman(std::span<const double> u, std::span<const double> v);

/// Biweight midcorrelation with tuning constant 9. Falls back to Pearson
/// (flagged) when either MAD is zero.
Correlation bicor(std::span<const double> u, std::span<const double> v);

enum class ScalarMeasure { pearson, spearman, bicor };

Correlation correlate(ScalarMeasure m, std::span<const double> u, std::span<const double> v);
std::string_view to_string(ScalarMeasure m);

}  // namespace confsom
