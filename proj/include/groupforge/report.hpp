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

#ifndef GROUPFORGE_REPORT_HPP
#define GROUPFORGE_REPORT_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "groupforge/cohort.hpp"
#include "groupforge/fairness.hpp"
#include "groupforge/partition.hpp"
#include "groupforge/similarity.hpp"

namespace groupforge {

struct FiveNumberSummary {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

/// Quartiles by linear interpolation between order statistics (the common
/// "type 7" rule). nullopt for an empty sample (e.g. a singleton group has
/// no within-group pairs).
std::optional<FiveNumberSummary> five_number_summary(std::vector<double> values);

constexpr const char* kQuartileConvention =
    "type 7 (linear interpolation between order statistics)";

struct GroupReportEntry {
  int group_id = 0;
  std::vector<std::string> members;  // student ids
  int size = 0;
  // Distribution of Corr(r_m, r_n) over all g*(g-1)/2 within-group pairs.
  std::optional<FiveNumberSummary> correlation_summary;
  std::vector<BalanceRecord> balance;
};

struct GroupReport {
  std::vector<GroupReportEntry> groups;
  double objective = 0.0;
  Sense sense = Sense::kMaximize;
  bool proven_optimal = false;
};

/// Assembles the per-group report: member ids, within-group mark-correlation
/// five-number summaries and balance records for every attribute column.
GroupReport build_group_report(const MarkMatrix& marks,
                               const std::optional<AttributeTable>& attrs,
                               const PartitionSolution& solution,
                               Sense sense,
                               CorrelationKind kind = CorrelationKind::kPearson);

/// Balance records for every (group, attribute column) pair, in group-major
/// order with attributes in table column order.
std::vector<BalanceRecord> balance_records(const PartitionSolution& solution,
                                           const AttributeTable& attrs);

const char* sense_name(Sense sense);  // "max" / "min"

/// Solution JSON: groups (student ids), objective, sense, proven_optimal,
/// balance records and group sizes.
nlohmann::ordered_json solution_to_json(const PartitionSolution& solution,
                                        const MarkMatrix& marks,
                                        const std::optional<AttributeTable>& attrs,
                                        Sense sense);

nlohmann::ordered_json report_to_json(const GroupReport& report);

/// CSV header for a report file. The leading comment line states the
/// quartile convention; a scenario column is prepended for side-by-side
/// comparisons. Attribute columns follow the order of the report's balance
/// records.
std::vector<std::string> report_csv_header(const GroupReport& report,
                                           bool with_scenario);

/// One CSV row per group; `scenario` (when non-empty) becomes the first
/// column.
std::vector<std::string> report_csv_rows(const GroupReport& report,
                                         const std::string& scenario = "");

}  // namespace groupforge

#endif  // GROUPFORGE_REPORT_HPP
