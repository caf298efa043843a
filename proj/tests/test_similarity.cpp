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

#include <cmath>

#include "groupforge/errors.hpp"
#include "groupforge/rng.hpp"
#include "groupforge/similarity.hpp"

using namespace groupforge;

namespace {

MarkMatrix two_students(std::vector<double> a, std::vector<double> b) {
  const std::size_t L = a.size();
  Matrix marks(2, L);
  for (std::size_t k = 0; k < L; ++k) {
    marks(0, k) = a[k];
    marks(1, k) = b[k];
  }
  std::vector<std::string> courses;
  for (std::size_t k = 0; k < L; ++k) courses.push_back("c" + std::to_string(k));
  return MarkMatrix({"s0", "s1"}, courses, marks);
}

}  // namespace

TEST_CASE("pearson_corr on the canonical examples") {
  const std::vector<double> up{1, 2, 3};
  const std::vector<double> doubled{2, 4, 6};
  const std::vector<double> down{3, 2, 1};
  const std::vector<double> flat{5, 5, 5};
  CHECK(pearson_corr(up, doubled) == 1.0);
  CHECK(pearson_corr(up, down) == -1.0);
  CHECK(pearson_corr(flat, up) == 0.0);  // zero-variance convention
  const std::vector<double> a{1, 2, 3, 4};
  const std::vector<double> b{1, 2, 4, 3};
  CHECK(pearson_corr(a, b) == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("pearson_corr length checks") {
  const std::vector<double> two{1, 2};
  const std::vector<double> three{1, 2, 3};
  const std::vector<double> one{1};
  const std::vector<double> other{2};
  CHECK_THROWS_AS(pearson_corr(two, three), LengthMismatch);
  CHECK_THROWS_AS(pearson_corr(one, other), LengthMismatch);
}

TEST_CASE("pearson_corr stays clamped under float overshoot") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a(5), b(5);
    for (int i = 0; i < 5; ++i) {
      a[i] = rng.uniform(0, 100);
      b[i] = 2.0 * a[i] + 1.0;  // perfectly linear
    }
    const double r = pearson_corr(a, b);
    CHECK(r <= 1.0);
    CHECK(r >= -1.0);
    CHECK(r == doctest::Approx(1.0));
  }
}

TEST_CASE("spearman_corr is rank-based") {
  const std::vector<double> up{1, 2, 3};
  const std::vector<double> exploding{10, 200, 3000};
  const std::vector<double> falling{9, 5, 1};
  CHECK(spearman_corr(up, exploding) == 1.0);
  CHECK(spearman_corr(up, falling) == -1.0);
  // Monotone but nonlinear relation: Spearman 1, Pearson < 1.
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> y{1, 8, 27, 64, 100};
  CHECK(spearman_corr(x, y) == 1.0);
  CHECK(pearson_corr(x, y) < 1.0);
  // Tie handling: average ranks.
  const std::vector<double> tied{1, 2, 2, 3};
  const std::vector<double> straight{1, 2, 3, 4};
  CHECK(spearman_corr(tied, straight) ==
        doctest::Approx(std::sqrt(0.9)).epsilon(1e-12));
}

TEST_CASE("edge_weight follows the thresholded exponential kernel") {
  const GraphParams params{10.0, 0.5};
  CHECK(edge_weight(1.0, params) ==
        doctest::Approx(1.1051709180756477).epsilon(1e-14));
  CHECK(edge_weight(0.49, params) == 0.0);
  // Closed boundary: corr == B is included.
  CHECK(edge_weight(0.5, params) ==
        doctest::Approx(1.0253151205244289).epsilon(1e-14));
  // Thresholding is on the signed correlation even though the weight
  // squares it.
  CHECK(edge_weight(-1.0, params) == 0.0);
}

TEST_CASE("edge_weight is monotone in |corr| above the threshold") {
  const GraphParams params{10.0, 0.5};
  double prev = 0.0;
  for (double corr = 0.5; corr <= 1.0; corr += 0.01) {
    const double w = edge_weight(corr, params);
    CHECK(w > prev);
    CHECK(w <= std::exp(1.0 / params.exponent_scale));
    prev = w;
  }
}

TEST_CASE("build_similarity_graph matches the kernel pairwise") {
  // Perfectly correlated pair.
  const MarkMatrix lin = two_students({1, 2, 3}, {2, 4, 6});
  const WeightedGraph g1 = build_similarity_graph(lin, {10.0, 0.5});
  CHECK(g1.weight(0, 1) == doctest::Approx(1.1051709180756477).epsilon(1e-14));
  CHECK(g1.weight(0, 0) == 0.0);
  CHECK(g1.weight(1, 1) == 0.0);

  // Correlation exactly 0.5 sits on the closed boundary.
  const MarkMatrix boundary = two_students({2, 1, 0}, {1, 2, 0});
  CHECK(pearson_corr(boundary.student_marks(0), boundary.student_marks(1)) ==
        0.5);
  const WeightedGraph g2 = build_similarity_graph(boundary, {10.0, 0.5});
  CHECK(g2.weight(0, 1) == doctest::Approx(1.0253151205244289).epsilon(1e-14));

  // Anti-correlated pair falls below any positive threshold.
  const MarkMatrix anti = two_students({1, 2, 3}, {3, 2, 1});
  const WeightedGraph g3 = build_similarity_graph(anti, {10.0, 0.5});
  CHECK(g3.weight(0, 1) == 0.0);
}

TEST_CASE("graph params are validated") {
  const MarkMatrix m = two_students({1, 2, 3}, {2, 4, 6});
  CHECK_THROWS_AS(build_similarity_graph(m, {0.0, 0.5}), InvalidConfig);
  CHECK_THROWS_AS(build_similarity_graph(m, {-1.0, 0.5}), InvalidConfig);
  CHECK_THROWS_AS(build_similarity_graph(m, {10.0, 1.5}), InvalidConfig);
}

TEST_CASE("degree_vector sums rows") {
  Matrix w2(2, 2, 0.0);
  w2(0, 1) = w2(1, 0) = 1.1;
  const auto d2 = degree_vector(WeightedGraph(w2));
  CHECK(d2 == std::vector<double>{1.1, 1.1});

  const auto dz = degree_vector(WeightedGraph(Matrix(3, 3, 0.0)));
  CHECK(dz == std::vector<double>{0.0, 0.0, 0.0});

  Matrix w3(3, 3, 0.0);
  w3(0, 1) = w3(1, 0) = 1.0;
  w3(0, 2) = w3(2, 0) = 2.0;
  const auto d3 = degree_vector(WeightedGraph(w3));
  CHECK(d3 == std::vector<double>{3.0, 1.0, 2.0});
}

TEST_CASE("WeightedGraph construction enforces its invariants") {
  Matrix asym(2, 2, 0.0);
  asym(0, 1) = 1.0;
  CHECK_THROWS_AS(WeightedGraph(asym), InvalidData);

  Matrix selfloop(2, 2, 0.0);
  selfloop(0, 0) = 1.0;
  CHECK_THROWS_AS(WeightedGraph(selfloop), InvalidData);

  Matrix negative(2, 2, 0.0);
  negative(0, 1) = negative(1, 0) = -0.5;
  CHECK_THROWS_AS(WeightedGraph(negative), InvalidData);
}

TEST_CASE("threshold soundness on random cohorts") {
  Rng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t n = 8, L = 6;
    Matrix marks(n, L);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < L; ++k) marks(i, k) = rng.uniform(0, 100);
    }
    std::vector<std::string> sids, cids;
    for (std::size_t i = 0; i < n; ++i) sids.push_back("s" + std::to_string(i));
    for (std::size_t k = 0; k < L; ++k) cids.push_back("c" + std::to_string(k));
    const MarkMatrix cohort(sids, cids, marks);

    const GraphParams params{10.0, 0.2};
    const WeightedGraph g = build_similarity_graph(cohort, params);
    for (std::size_t m = 0; m < n; ++m) {
      for (std::size_t k = m + 1; k < n; ++k) {
        const double corr =
            pearson_corr(cohort.student_marks(m), cohort.student_marks(k));
        CHECK((g.weight(m, k) == 0.0) == (corr < params.correlation_threshold));
        CHECK(g.weight(m, k) == g.weight(k, m));
      }
    }
  }
}

TEST_CASE("permuting students conjugates the adjacency") {
  Rng rng(13);
  const std::size_t n = 7, L = 5;
  Matrix marks(n, L);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < L; ++k) marks(i, k) = rng.uniform(0, 100);
  }
  std::vector<std::string> sids, cids;
  for (std::size_t i = 0; i < n; ++i) sids.push_back("s" + std::to_string(i));
  for (std::size_t k = 0; k < L; ++k) cids.push_back("c" + std::to_string(k));
  const MarkMatrix cohort(sids, cids, marks);

  const std::vector<std::size_t> perm{3, 1, 4, 0, 6, 2, 5};
  Matrix permuted(n, L);
  std::vector<std::string> pids;
  for (std::size_t i = 0; i < n; ++i) {
    pids.push_back(sids[perm[i]]);
    for (std::size_t k = 0; k < L; ++k) permuted(i, k) = marks(perm[i], k);
  }
  const MarkMatrix shuffled(pids, cids, permuted);

  const GraphParams params{10.0, 0.0};
  const WeightedGraph g = build_similarity_graph(cohort, params);
  const WeightedGraph h = build_similarity_graph(shuffled, params);
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t k = 0; k < n; ++k) {
      CHECK(h.weight(m, k) == g.weight(perm[m], perm[k]));
    }
  }
}
