// Copyright 2026 The Groupforge Authors
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

#include "groupforge/fairness.hpp"

#include <algorithm>
#include <cmath>

#include "groupforge/errors.hpp"

namespace groupforge {

double balance(double group_ratio, double population_ratio) {
  const bool group_zero = group_ratio == 0.0;
  const bool pop_zero = population_ratio == 0.0;
  if (group_zero && pop_zero) return 1.0;
  if (group_zero || pop_zero) return 0.0;
  const double r = group_ratio / population_ratio;
  return std::min(r, 1.0 / r);
}

double group_ratio(std::span<const int> assignment, const AttributeTable& attrs,
                   std::string_view attribute, int group) {
  const auto bits = attrs.column(attribute);
  std::size_t members = 0;
  std::size_t attributed = 0;
  for (std::size_t m = 0; m < assignment.size(); ++m) {
    if (assignment[m] == group) {
      ++members;
      attributed += bits[m];
    }
  }
  if (members == 0) {
    throw EmptyGroup("group " + std::to_string(group) + " has no members");
  }
  return static_cast<double>(attributed) / static_cast<double>(members);
}

std::optional<CountWindow> count_window(int group_size, double population_ratio,
                                        double min_balance) {
  if (group_size < 1) {
    throw InvalidData("group size must be >= 1");
  }
  if (min_balance == 0.0) {
    return CountWindow{0, group_size};
  }
  constexpr double kBoundaryEps = 1e-9;
  const double g = static_cast<double>(group_size);
  const double lo_real = min_balance * population_ratio * g;
  const double hi_real = std::min(1.0, population_ratio / min_balance) * g;
  const int lo = std::max(0, static_cast<int>(std::ceil(lo_real - kBoundaryEps)));
  const int hi =
      std::min(group_size, static_cast<int>(std::floor(hi_real + kBoundaryEps)));
  if (lo > hi) return std::nullopt;
  return CountWindow{lo, hi};
}

}  // namespace groupforge
