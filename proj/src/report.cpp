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

#include "groupforge/report.hpp"

#include <algorithm>
#include <cmath>

#include "groupforge/csv.hpp"
#include "groupforge/errors.hpp"

namespace groupforge {

namespace {

/// Type-7 quantile: h = (n-1)p, linear interpolation between the two
/// bracketing order statistics.
double quantile_type7(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  const double h = static_cast<double>(n - 1) * p;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const double frac = h - static_cast<double>(lo);
  if (frac == 0.0 || lo + 1 >= n) return sorted[lo];
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

std::optional<FiveNumberSummary> five_number_summary(std::vector<double> values) {
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  FiveNumberSummary s;
  s.min = values.front();
  s.q1 = quantile_type7(values, 0.25);
  s.median = quantile_type7(values, 0.5);
  s.q3 = quantile_type7(values, 0.75);
  s.max = values.back();
  return s;
}

std::vector<BalanceRecord> balance_records(const PartitionSolution& solution,
                                           const AttributeTable& attrs) {
  std::vector<BalanceRecord> records;
  for (std::size_t g = 0; g < solution.groups.size(); ++g) {
    for (const auto& name : attrs.attribute_names()) {
      BalanceRecord rec;
      rec.group_id = static_cast<int>(g);
      rec.attribute = name;
      rec.group_ratio =
          group_ratio(solution.assignment, attrs, name, static_cast<int>(g));
      rec.population_ratio = population_ratio(attrs, name);
      rec.balance = balance(rec.group_ratio, rec.population_ratio);
      records.push_back(std::move(rec));
    }
  }
  return records;
}

GroupReport build_group_report(const MarkMatrix& marks,
                               const std::optional<AttributeTable>& attrs,
                               const PartitionSolution& solution, Sense sense,
                               CorrelationKind kind) {
  GroupReport report;
  report.objective = solution.objective;
  report.sense = sense;
  report.proven_optimal = solution.proven_optimal;

  const auto records = attrs ? balance_records(solution, *attrs)
                             : std::vector<BalanceRecord>{};

  for (std::size_t g = 0; g < solution.groups.size(); ++g) {
    GroupReportEntry entry;
    entry.group_id = static_cast<int>(g);
    entry.size = static_cast<int>(solution.groups[g].size());
    for (int m : solution.groups[g]) {
      entry.members.push_back(marks.student_ids()[m]);
    }
    std::vector<double> correlations;
    for (std::size_t a = 0; a < solution.groups[g].size(); ++a) {
      for (std::size_t b = a + 1; b < solution.groups[g].size(); ++b) {
        correlations.push_back(
            correlation(kind, marks.student_marks(solution.groups[g][a]),
                        marks.student_marks(solution.groups[g][b])));
      }
    }
    entry.correlation_summary = five_number_summary(std::move(correlations));
    for (const auto& rec : records) {
      if (rec.group_id == entry.group_id) entry.balance.push_back(rec);
    }
    report.groups.push_back(std::move(entry));
  }
  return report;
}

const char* sense_name(Sense sense) {
  return sense == Sense::kMaximize ? "max" : "min";
}

namespace {

nlohmann::ordered_json balance_record_json(const BalanceRecord& rec) {
  return nlohmann::ordered_json{{"group_id", rec.group_id},
                                {"attribute", rec.attribute},
                                {"group_ratio", rec.group_ratio},
                                {"population_ratio", rec.population_ratio},
                                {"balance", rec.balance}};
}

nlohmann::ordered_json summary_json(
    const std::optional<FiveNumberSummary>& summary) {
  if (!summary) return nullptr;
  return nlohmann::ordered_json{{"min", summary->min},
                                {"q1", summary->q1},
                                {"median", summary->median},
                                {"q3", summary->q3},
                                {"max", summary->max}};
}

}  // namespace

nlohmann::ordered_json solution_to_json(const PartitionSolution& solution,
                                        const MarkMatrix& marks,
                                        const std::optional<AttributeTable>& attrs,
                                        Sense sense) {
  nlohmann::ordered_json groups = nlohmann::ordered_json::array();
  nlohmann::ordered_json sizes = nlohmann::ordered_json::array();
  for (const auto& group : solution.groups) {
    nlohmann::ordered_json ids = nlohmann::ordered_json::array();
    for (int m : group) ids.push_back(marks.student_ids()[m]);
    groups.push_back(std::move(ids));
    sizes.push_back(group.size());
  }
  nlohmann::ordered_json balance = nlohmann::ordered_json::array();
  if (attrs) {
    for (const auto& rec : balance_records(solution, *attrs)) {
      balance.push_back(balance_record_json(rec));
    }
  }
  return nlohmann::ordered_json{{"groups", std::move(groups)},
                                {"objective", solution.objective},
                                {"sense", sense_name(sense)},
                                {"proven_optimal", solution.proven_optimal},
                                {"balance", std::move(balance)},
                                {"group_sizes", std::move(sizes)}};
}

nlohmann::ordered_json report_to_json(const GroupReport& report) {
  nlohmann::ordered_json groups = nlohmann::ordered_json::array();
  for (const auto& entry : report.groups) {
    nlohmann::ordered_json balance = nlohmann::ordered_json::array();
    for (const auto& rec : entry.balance) {
      balance.push_back(balance_record_json(rec));
    }
    groups.push_back(
        nlohmann::ordered_json{{"group_id", entry.group_id},
                               {"size", entry.size},
                               {"members", entry.members},
                               {"correlation_summary",
                                summary_json(entry.correlation_summary)},
                               {"balance", std::move(balance)}});
  }
  return nlohmann::ordered_json{
      {"objective", report.objective},
      {"sense", sense_name(report.sense)},
      {"proven_optimal", report.proven_optimal},
      {"quartile_convention", kQuartileConvention},
      {"groups", std::move(groups)}};
}

std::vector<std::string> report_csv_header(const GroupReport& report,
                                           bool with_scenario) {
  std::string header;
  if (with_scenario) header += "scenario,";
  header += "group_id,size,members,corr_min,corr_q1,corr_median,corr_q3,corr_max";
  if (!report.groups.empty()) {
    for (const auto& rec : report.groups.front().balance) {
      header += ",ratio_" + rec.attribute + ",balance_" + rec.attribute;
    }
  }
  return {std::string("# quartile_convention: ") + kQuartileConvention,
          std::move(header)};
}

std::vector<std::string> report_csv_rows(const GroupReport& report,
                                         const std::string& scenario) {
  std::vector<std::string> rows;
  for (const auto& entry : report.groups) {
    std::string row;
    if (!scenario.empty()) row += scenario + ",";
    row += std::to_string(entry.group_id) + "," + std::to_string(entry.size) + ",";
    for (std::size_t i = 0; i < entry.members.size(); ++i) {
      if (i > 0) row += ';';
      row += entry.members[i];
    }
    if (entry.correlation_summary) {
      const auto& s = *entry.correlation_summary;
      for (double v : {s.min, s.q1, s.median, s.q3, s.max}) {
        row += "," + format_double(v);
      }
    } else {
      row += ",,,,,";
    }
    for (const auto& rec : entry.balance) {
      row += "," + format_double(rec.group_ratio) + "," +
             format_double(rec.balance);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace groupforge
