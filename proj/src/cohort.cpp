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

#include "groupforge/cohort.hpp"

#include <algorithm>
#include <cstdio>
#include <unordered_set>

#include "groupforge/csv.hpp"
#include "groupforge/errors.hpp"
#include "groupforge/rng.hpp"

namespace groupforge {

namespace {

void require_unique(const std::vector<std::string>& ids, const char* what) {
  std::unordered_set<std::string_view> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second) {
      throw DuplicateId(std::string("duplicate ") + what + ": " + id);
    }
  }
}

std::string padded_id(char prefix, std::size_t index, std::size_t total) {
  std::size_t width = 1;
  for (std::size_t v = total; v >= 10; v /= 10) ++width;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%c%0*zu", prefix, static_cast<int>(width),
                index + 1);
  return buf;
}

}  // namespace

MarkMatrix::MarkMatrix(std::vector<std::string> student_ids,
                       std::vector<std::string> course_ids, Matrix marks)
    : student_ids_(std::move(student_ids)),
      course_ids_(std::move(course_ids)),
      marks_(std::move(marks)) {
  if (student_ids_.size() < 2) {
    throw InvalidData("a cohort needs at least 2 students");
  }
  if (course_ids_.size() < 2) {
    throw InvalidData("a cohort needs at least 2 courses");
  }
  if (marks_.rows() != student_ids_.size() ||
      marks_.cols() != course_ids_.size()) {
    throw DimensionMismatch("mark matrix shape does not match id lists");
  }
  require_unique(student_ids_, "student id");
  require_unique(course_ids_, "course id");
  for (std::size_t m = 0; m < marks_.rows(); ++m) {
    for (std::size_t k = 0; k < marks_.cols(); ++k) {
      const double v = marks_(m, k);
      if (!(v >= 0.0 && v <= 100.0)) {
        throw MarkOutOfRange("mark out of range [0,100] for student " +
                             student_ids_[m] + ", course " + course_ids_[k] +
                             ": " + format_double(v));
      }
    }
  }
}

MarkMatrix MarkMatrix::subset(std::span<const std::size_t> rows) const {
  std::vector<std::string> ids;
  Matrix sub(rows.size(), num_courses());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ids.push_back(student_ids_[rows[i]]);
    for (std::size_t k = 0; k < num_courses(); ++k) {
      sub(i, k) = marks_(rows[i], k);
    }
  }
  return MarkMatrix(std::move(ids), course_ids_, std::move(sub));
}

AttributeTable::AttributeTable(std::vector<std::string> student_ids,
                               std::vector<std::string> attribute_names,
                               std::vector<std::vector<std::uint8_t>> columns)
    : student_ids_(std::move(student_ids)),
      names_(std::move(attribute_names)),
      columns_(std::move(columns)) {
  if (names_.size() != columns_.size()) {
    throw DimensionMismatch("attribute name/column count mismatch");
  }
  require_unique(student_ids_, "student id");
  require_unique(names_, "attribute name");
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    if (columns_[j].size() != student_ids_.size()) {
      throw DimensionMismatch("attribute column length mismatch: " + names_[j]);
    }
    for (std::uint8_t v : columns_[j]) {
      if (v != 0 && v != 1) {
        throw NonBinaryValue("attribute " + names_[j] +
                             " contains a non-binary value");
      }
    }
  }
}

bool AttributeTable::has_attribute(std::string_view name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

std::span<const std::uint8_t> AttributeTable::column(
    std::string_view name) const {
  for (std::size_t j = 0; j < names_.size(); ++j) {
    if (names_[j] == name) return columns_[j];
  }
  throw UnknownAttribute("unknown attribute: " + std::string(name));
}

AttributeTable AttributeTable::subset(std::span<const std::size_t> rows) const {
  std::vector<std::string> ids;
  for (std::size_t r : rows) ids.push_back(student_ids_[r]);
  std::vector<std::vector<std::uint8_t>> cols(columns_.size());
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    for (std::size_t r : rows) cols[j].push_back(columns_[j][r]);
  }
  return AttributeTable(std::move(ids), names_, std::move(cols));
}

MarkMatrix load_marks(const std::filesystem::path& path, char delimiter) {
  const auto rows = read_delimited(path, delimiter);
  if (rows.size() < 2) {
    throw MalformedRow("marks file needs a header row and data rows: " +
                       path.string());
  }
  const auto& header = rows[0];
  if (header.size() < 2) {
    throw MalformedRow("marks header needs at least one course column");
  }
  std::vector<std::string> course_ids(header.begin() + 1, header.end());
  const std::size_t num_courses = course_ids.size();

  std::vector<std::string> student_ids;
  Matrix marks(rows.size() - 1, num_courses);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != num_courses + 1) {
      throw MalformedRow("row " + std::to_string(r + 1) + ": expected " +
                         std::to_string(num_courses + 1) + " cells, got " +
                         std::to_string(row.size()));
    }
    student_ids.push_back(row[0]);
    for (std::size_t k = 0; k < num_courses; ++k) {
      const auto value = parse_double(row[k + 1]);
      if (!value) {
        throw MalformedRow("row " + std::to_string(r + 1) +
                           ": cell is not a number: '" + row[k + 1] + "'");
      }
      marks(r - 1, k) = *value;
    }
  }
  return MarkMatrix(std::move(student_ids), std::move(course_ids),
                    std::move(marks));
}

void write_marks(const MarkMatrix& marks, const std::filesystem::path& path,
                 char delimiter) {
  std::vector<std::string> lines;
  std::string header = "student_id";
  for (const auto& c : marks.course_ids()) {
    header += delimiter;
    header += c;
  }
  lines.push_back(std::move(header));
  for (std::size_t m = 0; m < marks.num_students(); ++m) {
    std::string line = marks.student_ids()[m];
    for (std::size_t k = 0; k < marks.num_courses(); ++k) {
      line += delimiter;
      line += format_double(marks.marks()(m, k));
    }
    lines.push_back(std::move(line));
  }
  write_text_file(path, lines);
}

namespace {

AttributeTable load_attributes_impl(const std::filesystem::path& path,
                                    char delimiter,
                                    std::span<const std::string> expected_ids) {
  const auto rows = read_delimited(path, delimiter);
  if (rows.empty()) {
    throw MalformedRow("attributes file is empty: " + path.string());
  }
  const auto& header = rows[0];
  if (header.empty()) {
    throw MalformedRow("attributes header is empty");
  }
  std::vector<std::string> names(header.begin() + 1, header.end());
  std::vector<std::string> ids;
  std::vector<std::vector<std::uint8_t>> columns(names.size());
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != names.size() + 1) {
      throw MalformedRow("row " + std::to_string(r + 1) + ": expected " +
                         std::to_string(names.size() + 1) + " cells");
    }
    ids.push_back(row[0]);
    for (std::size_t j = 0; j < names.size(); ++j) {
      const auto& cell = row[j + 1];
      if (cell == "0") {
        columns[j].push_back(0);
      } else if (cell == "1") {
        columns[j].push_back(1);
      } else {
        throw NonBinaryValue("row " + std::to_string(r + 1) + ", attribute " +
                             names[j] + ": value '" + cell +
                             "' is not 0 or 1");
      }
    }
  }
  if (!expected_ids.empty()) {
    if (ids.size() != expected_ids.size()) {
      throw IdMismatch("attributes file has " + std::to_string(ids.size()) +
                       " students, marks file has " +
                       std::to_string(expected_ids.size()));
    }
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (ids[i] != expected_ids[i]) {
        throw IdMismatch("student id mismatch at row " + std::to_string(i + 2) +
                         ": '" + ids[i] + "' vs marks file '" +
                         expected_ids[i] + "'");
      }
    }
  }
  return AttributeTable(std::move(ids), std::move(names), std::move(columns));
}

}  // namespace

AttributeTable load_attributes(const std::filesystem::path& path,
                               char delimiter) {
  return load_attributes_impl(path, delimiter, {});
}

AttributeTable load_attributes(const std::filesystem::path& path,
                               char delimiter,
                               std::span<const std::string> expected_ids) {
  return load_attributes_impl(path, delimiter, expected_ids);
}

double population_ratio(const AttributeTable& table,
                        std::string_view attribute) {
  const auto col = table.column(attribute);
  std::size_t count = 0;
  for (std::uint8_t v : col) count += v;
  return static_cast<double>(count) / static_cast<double>(col.size());
}

SynthCohort synth_cohort(std::span<const AffinitySpec> specs,
                         std::size_t num_courses, std::uint64_t seed) {
  if (specs.empty()) {
    throw EmptySpec("synthetic cohort needs at least one affinity");
  }
  std::size_t total = 0;
  for (const auto& spec : specs) {
    if (spec.count < 1) {
      throw InvalidData("affinity count must be >= 1");
    }
    if (spec.profile.size() != num_courses) {
      throw ProfileLengthMismatch(
          "profile length " + std::to_string(spec.profile.size()) +
          " does not match course count " + std::to_string(num_courses));
    }
    if (spec.noise_std < 0.0) {
      throw InvalidData("noise std must be >= 0");
    }
    total += spec.count;
  }

  Rng rng(seed);
  Matrix marks(total, num_courses);
  std::vector<std::string> labels;
  std::size_t row = 0;
  for (std::size_t a = 0; a < specs.size(); ++a) {
    const auto& spec = specs[a];
    const std::string label =
        spec.label.empty() ? "affinity_" + std::to_string(a) : spec.label;
    for (std::size_t i = 0; i < spec.count; ++i, ++row) {
      labels.push_back(label);
      for (std::size_t k = 0; k < num_courses; ++k) {
        double v = spec.profile[k];
        if (spec.noise_std > 0.0) v += spec.noise_std * rng.normal();
        marks(row, k) = std::clamp(v, 0.0, 100.0);
      }
    }
  }

  std::vector<std::string> student_ids;
  std::vector<std::string> course_ids;
  for (std::size_t m = 0; m < total; ++m) {
    student_ids.push_back(padded_id('s', m, total));
  }
  for (std::size_t k = 0; k < num_courses; ++k) {
    course_ids.push_back(padded_id('c', k, num_courses));
  }
  return SynthCohort{MarkMatrix(std::move(student_ids), std::move(course_ids),
                                std::move(marks)),
                     std::move(labels)};
}

}  // namespace groupforge
