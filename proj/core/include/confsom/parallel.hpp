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

#include <cstddef>
#include <functional>

namespace confsom {

/// Caps the number of worker threads used by parallel loops (minimum 1).
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs body(begin, end) over contiguous chunks of [0, n). Chunks are disjoint,
/// so callers writing to pre-assigned slots get results independent of the
/// worker count. The first exception thrown by any chunk is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace confsom
