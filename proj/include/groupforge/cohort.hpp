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

#ifndef GROUPFORGE_COHORT_HPP
#define GROUPFORGE_COHORT_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "groupforge/matrix.hpp"

namespace groupforge {

/// Course marks for a cohort: N students x L courses, values in [0, 100]
/// percent. Immutable once constructed; the constructor enforces all
/// invariants (N >= 2, L >= 2, unique ids, marks within range).
class MarkMatrix {
 public:
  MarkMatrix(std::vector<std::string> student_ids,
             std::vector<std::string> course_ids, Matrix marks);

  const std::vector<std::string>& student_ids() const { return student_ids_; }
  const std::vector<std::string>& course_ids() const { return course_ids_; }
  const Matrix& marks() const { return marks_; }

  std::size_t num_students() const { return student_ids_.size(); }
  std::size_t num_courses() const { return course_ids_.size(); }

  /// Mark vector of one student across all courses.
  std::span<const double> student_marks(std::size_t m) const {
    return marks_.row(m);
  }

  /// Row subset in the given (ascending) index order.
  MarkMatrix subset(std::span<const std::size_t> rows) const;

 private:
  std::vector<std::string> student_ids_;
  std::vector<std::string> course_ids_;
  Matrix marks_;
};

/// Binary sensitive-attribute columns aligned with a MarkMatrix's student
/// order. Every cell is 0 or 1.
class AttributeTable {
 public:
  AttributeTable(std::vector<std::string> student_ids,
                 std::vector<std::string> attribute_names,
                 std::vector<std::vector<std::uint8_t>> columns);

  const std::vector<std::string>& student_ids() const { return student_ids_; }
  const std::vector<std::string>& attribute_names() const { return names_; }
  std::size_t num_students() const { return student_ids_.size(); }

  bool has_attribute(std::string_view name) const;
  /// Throws UnknownAttribute.
  std::span<const std::uint8_t> column(std::string_view name) const;

  AttributeTable subset(std::span<const std::size_t> rows) const;

 private:
  std::vector<std::string> student_ids_;
  std::vector<std::string> names_;
  std::vector<std::vector<std::uint8_t>> columns_;
};

/// Loads a marks CSV: header `student_id,<course...>`, one row per student.
MarkMatrix load_marks(const std::filesystem::path& path, char delimiter = ',');

/// Writes the matrix back out in the same layout with canonical number
/// formatting (shortest round-trip decimal).
void write_marks(const MarkMatrix& marks, const std::filesystem::path& path,
                 char delimiter = ',');

/// Loads an attribute CSV: header `student_id,<attr...>`, cells in {0,1}.
AttributeTable load_attributes(const std::filesystem::path& path,
                               char delimiter = ',');

/// Same, and additionally requires student ids to equal `expected_ids`
/// element-wise (order included); throws IdMismatch otherwise.
AttributeTable load_attributes(const std::filesystem::path& path,
                               char delimiter,
                               std::span<const std::string> expected_ids);

/// Share of students carrying the attribute, in [0, 1].
double population_ratio(const AttributeTable& table, std::string_view attribute);

/// One synthetic skill profile: `count` students whose expected mark in
/// course k is profile[k], plus Gaussian noise.
struct AffinitySpec {
  std::string label;
  std::size_t count = 0;
  std::vector<double> profile;
  double noise_std = 0.0;
};

struct SynthCohort {
  MarkMatrix marks;
  std::vector<std::string> labels;  // ground-truth affinity per student
};

/// Deterministic synthetic cohort: marks = profile + noise, clamped to
/// [0, 100]. Identical (specs, num_courses, seed) give bit-identical output.
SynthCohort synth_cohort(std::span<const AffinitySpec> specs,
                         std::size_t num_courses, std::uint64_t seed);

}  // namespace groupforge

#endif  // GROUPFORGE_COHORT_HPP
