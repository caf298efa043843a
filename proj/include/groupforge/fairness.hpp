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

#ifndef GROUPFORGE_FAIRNESS_HPP
#define GROUPFORGE_FAIRNESS_HPP

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "groupforge/cohort.hpp"

namespace groupforge {

/// One group-attribute balance measurement, ready for reporting.
struct BalanceRecord {
  int group_id = 0;
  std::string attribute;
  double group_ratio = 0.0;       // a_cs
  double population_ratio = 0.0;  // a_s
  double balance = 0.0;           // B_cs
};

/// Balance B = min(R, 1/R) with R = group_ratio / population_ratio.
/// Zero conventions: B = 1 when both ratios are 0 (the attribute is absent
/// everywhere, vacuously fair); B = 0 when exactly one is 0 (maximal
/// imbalance). Total function, no errors.
double balance(double group_ratio, double population_ratio);

/// Share of group `c` members carrying the attribute. Throws EmptyGroup when
/// no vertex is assigned to `c`, UnknownAttribute for a bad name.
double group_ratio(std::span<const int> assignment, const AttributeTable& attrs,
                   std::string_view attribute, int group);

/// Closed integer interval of admissible attributed-member counts.
struct CountWindow {
  int lo = 0;
  int hi = 0;
};

/// Integer linearization of the balance lower bound: for a group of
/// `group_size`, the attributed count k is admissible iff
/// balance(k/group_size, population_ratio) >= min_balance. A 1e-9 epsilon
/// absorbs float error on exact-integer boundaries (e.g. 0.2 * 5 = 1).
/// min_balance = 0 yields the full window [0, group_size]; nullopt means no
/// integer count fits.
std::optional<CountWindow> count_window(int group_size, double population_ratio,
                                        double min_balance);

}  // namespace groupforge

#endif  // GROUPFORGE_FAIRNESS_HPP
