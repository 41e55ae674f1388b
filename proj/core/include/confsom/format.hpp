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

#include <string>
#include <string_view>

namespace confsom {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// Fixed-point with `decimals` digits after the point ("%.*f").
std::string format_fixed(double value, int decimals);

/// Escapes &, <, >, " and ' for XML attribute and text content.
std::string xml_escape(std::string_view text);

}  // namespace confsom
