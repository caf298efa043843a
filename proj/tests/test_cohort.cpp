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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "groupforge/cohort.hpp"
#include "groupforge/errors.hpp"
#include "groupforge/rng.hpp"
#include "test_support.hpp"

using namespace groupforge;

TEST_CASE("load_marks preserves a 3x2 cohort exactly") {
  const auto dir = gftest::make_temp_dir("marks");
  gftest::write_file(dir / "marks.csv",
                     "student_id,maths,physics\n"
                     "s1,55,70\n"
                     "s2,62,48\n"
                     "s3,91,85\n");
  const MarkMatrix m = load_marks(dir / "marks.csv");
  CHECK(m.num_students() == 3);
  CHECK(m.num_courses() == 2);
  CHECK(m.student_ids() == std::vector<std::string>{"s1", "s2", "s3"});
  CHECK(m.course_ids() == std::vector<std::string>{"maths", "physics"});
  CHECK(m.marks()(0, 0) == 55.0);
  CHECK(m.marks()(0, 1) == 70.0);
  CHECK(m.marks()(1, 0) == 62.0);
  CHECK(m.marks()(1, 1) == 48.0);
  CHECK(m.marks()(2, 0) == 91.0);
  CHECK(m.marks()(2, 1) == 85.0);
}

TEST_CASE("load_marks rejects an out-of-range mark") {
  const auto dir = gftest::make_temp_dir("marks");
  gftest::write_file(dir / "marks.csv",
                     "student_id,a,b\ns1,105,50\ns2,40,40\n");
  CHECK_THROWS_AS(load_marks(dir / "marks.csv"), MarkOutOfRange);
}

TEST_CASE("load_marks error paths") {
  const auto dir = gftest::make_temp_dir("marks");
  CHECK_THROWS_AS(load_marks(dir / "absent.csv"), MissingFile);

  gftest::write_file(dir / "short_row.csv", "student_id,a,b\ns1,50\ns2,40,40\n");
  CHECK_THROWS_AS(load_marks(dir / "short_row.csv"), MalformedRow);

  gftest::write_file(dir / "blank_cell.csv",
                     "student_id,a,b\ns1,50,\ns2,40,40\n");
  CHECK_THROWS_AS(load_marks(dir / "blank_cell.csv"), MalformedRow);

  gftest::write_file(dir / "not_number.csv",
                     "student_id,a,b\ns1,50,abc\ns2,40,40\n");
  CHECK_THROWS_AS(load_marks(dir / "not_number.csv"), MalformedRow);

  gftest::write_file(dir / "dup_id.csv", "student_id,a,b\ns1,1,2\ns1,3,4\n");
  CHECK_THROWS_AS(load_marks(dir / "dup_id.csv"), DuplicateId);

  gftest::write_file(dir / "dup_course.csv", "student_id,a,a\ns1,1,2\ns2,3,4\n");
  CHECK_THROWS_AS(load_marks(dir / "dup_course.csv"), DuplicateId);
}

TEST_CASE("a 54x23 cohort round-trips through write_marks byte-exactly") {
  // Paper-shaped cohort via the generator, then write -> load -> write.
  std::vector<AffinitySpec> specs;
  std::vector<double> profile(23);
  for (std::size_t k = 0; k < 23; ++k) profile[k] = 40.0 + 2.0 * double(k);
  specs.push_back({"x", 54, profile, 7.5});
  const SynthCohort cohort = synth_cohort(specs, 23, 99);
  CHECK(cohort.marks.num_students() == 54);
  CHECK(cohort.marks.num_courses() == 23);

  const auto dir = gftest::make_temp_dir("roundtrip");
  write_marks(cohort.marks, dir / "a.csv");
  const MarkMatrix reloaded = load_marks(dir / "a.csv");
  CHECK(reloaded.marks() == cohort.marks.marks());
  CHECK(reloaded.student_ids() == cohort.marks.student_ids());
  write_marks(reloaded, dir / "b.csv");
  CHECK(gftest::read_file(dir / "a.csv") == gftest::read_file(dir / "b.csv"));
}

TEST_CASE("MarkMatrix rejects degenerate shapes") {
  Matrix one_course(2, 1, 50.0);
  CHECK_THROWS_AS(MarkMatrix({"a", "b"}, {"c1"}, one_course), InvalidData);
  Matrix one_student(1, 2, 50.0);
  CHECK_THROWS_AS(MarkMatrix({"a"}, {"c1", "c2"}, one_student), InvalidData);
}

TEST_CASE("load_attributes accepts binary columns and checks ids") {
  const auto dir = gftest::make_temp_dir("attrs");
  std::string content = "student_id,flag\n";
  for (int i = 0; i < 10; ++i) {
    content += "s" + std::to_string(i) + "," + (i < 2 ? "1" : "0") + "\n";
  }
  gftest::write_file(dir / "attrs.csv", content);

  const AttributeTable table = load_attributes(dir / "attrs.csv");
  CHECK(table.num_students() == 10);
  CHECK(population_ratio(table, "flag") == 0.2);

  std::vector<std::string> expected;
  for (int i = 0; i < 10; ++i) expected.push_back("s" + std::to_string(i));
  CHECK_NOTHROW(load_attributes(dir / "attrs.csv", ',', expected));

  expected[3] = "someone_else";
  CHECK_THROWS_AS(load_attributes(dir / "attrs.csv", ',', expected), IdMismatch);
}

TEST_CASE("load_attributes rejects non-binary cells") {
  const auto dir = gftest::make_temp_dir("attrs");
  gftest::write_file(dir / "bad.csv", "student_id,flag\ns1,2\ns2,0\n");
  CHECK_THROWS_AS(load_attributes(dir / "bad.csv"), NonBinaryValue);
  gftest::write_file(dir / "bad2.csv", "student_id,flag\ns1,0.5\ns2,0\n");
  CHECK_THROWS_AS(load_attributes(dir / "bad2.csv"), NonBinaryValue);
}

TEST_CASE("an all-zero attribute column is valid") {
  const auto dir = gftest::make_temp_dir("attrs");
  gftest::write_file(dir / "zeros.csv", "student_id,flag\ns1,0\ns2,0\ns3,0\n");
  const AttributeTable table = load_attributes(dir / "zeros.csv");
  CHECK(population_ratio(table, "flag") == 0.0);
}

TEST_CASE("population_ratio endpoints and unknown attribute") {
  AttributeTable table({"a", "b"}, {"s"}, {{1, 1}});
  CHECK(population_ratio(table, "s") == 1.0);
  CHECK_THROWS_AS(population_ratio(table, "nope"), UnknownAttribute);
}

TEST_CASE("population_ratio times N is an integer") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng.below(30);
    std::vector<std::string> ids;
    std::vector<std::uint8_t> bits;
    for (std::size_t i = 0; i < n; ++i) {
      ids.push_back("v" + std::to_string(i));
      bits.push_back(static_cast<std::uint8_t>(rng.below(2)));
    }
    AttributeTable table(std::move(ids), {"s"}, {std::move(bits)});
    const double scaled = population_ratio(table, "s") * double(n);
    CHECK(scaled == doctest::Approx(std::round(scaled)).epsilon(1e-12));
  }
}

TEST_CASE("synth_cohort zero noise reproduces the profile exactly") {
  std::vector<AffinitySpec> specs{{"flat", 3, {70.0, 70.0, 70.0}, 0.0}};
  const SynthCohort cohort = synth_cohort(specs, 3, 1);
  for (std::size_t m = 0; m < 3; ++m) {
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(cohort.marks.marks()(m, k) == 70.0);
    }
  }
  CHECK(cohort.labels == std::vector<std::string>{"flat", "flat", "flat"});
}

TEST_CASE("synth_cohort is deterministic in the seed and stays in range") {
  std::vector<AffinitySpec> specs{
      {"lo", 4, {5.0, 50.0, 95.0}, 40.0},   // large noise exercises clamping
      {"hi", 4, {95.0, 50.0, 5.0}, 40.0}};
  const SynthCohort a = synth_cohort(specs, 3, 42);
  const SynthCohort b = synth_cohort(specs, 3, 42);
  CHECK(a.marks.marks() == b.marks.marks());

  const SynthCohort c = synth_cohort(specs, 3, 43);
  CHECK(a.marks.marks() != c.marks.marks());

  for (double v : a.marks.marks().data()) {
    CHECK(v >= 0.0);
    CHECK(v <= 100.0);
  }
}

TEST_CASE("synth_cohort input validation") {
  CHECK_THROWS_AS(synth_cohort({}, 3, 1), EmptySpec);
  std::vector<AffinitySpec> wrong_len{{"x", 2, {70.0, 70.0}, 0.0}};
  CHECK_THROWS_AS(synth_cohort(wrong_len, 3, 1), ProfileLengthMismatch);
  std::vector<AffinitySpec> zero_count{{"x", 0, {70.0, 70.0, 70.0}, 0.0}};
  CHECK_THROWS_AS(synth_cohort(zero_count, 3, 1), InvalidData);
}

TEST_CASE("subset keeps ids aligned") {
  std::vector<AffinitySpec> specs{{"x", 6, {10.0, 20.0, 30.0}, 1.0}};
  const SynthCohort cohort = synth_cohort(specs, 3, 5);
  const std::vector<std::size_t> rows{1, 3, 4};
  const MarkMatrix sub = cohort.marks.subset(rows);
  CHECK(sub.num_students() == 3);
  CHECK(sub.student_ids()[0] == cohort.marks.student_ids()[1]);
  CHECK(sub.marks()(2, 2) == cohort.marks.marks()(4, 2));

  AttributeTable table(cohort.marks.student_ids(), {"s"},
                       {{0, 1, 0, 1, 0, 1}});
  const AttributeTable tsub = table.subset(rows);
  CHECK(tsub.column("s")[0] == 1);
  CHECK(tsub.column("s")[1] == 1);
  CHECK(tsub.column("s")[2] == 0);
}
