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

#include "groupforge/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "groupforge/errors.hpp"

namespace groupforge {

namespace {

void require_same_length(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw LengthMismatch("vector lengths differ: " + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()));
  }
  if (a.size() < 2) {
    throw LengthMismatch("correlation needs vectors of length >= 2");
  }
}

/// Fractional ranks, 1-based, ties averaged.
std::vector<double> fractional_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double pearson_corr(std::span<const double> a, std::span<const double> b) {
  require_same_length(a, b);
  const std::size_t n = a.size();
  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_a += a[i];
    mean_b += b[i];
  }
  mean_a /= static_cast<double>(n);
  mean_b /= static_cast<double>(n);
  double cov = 0.0, var_a = 0.0, var_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (var_a == 0.0 || var_b == 0.0) return 0.0;
  // sqrt of the product, not product of sqrts: keeps exact-rational
  // correlations like 0.5 exact when the variance product is a perfect square.
  const double r = cov / std::sqrt(var_a * var_b);
  return std::clamp(r, -1.0, 1.0);
}

double spearman_corr(std::span<const double> a, std::span<const double> b) {
  require_same_length(a, b);
  const auto ra = fractional_ranks(a);
  const auto rb = fractional_ranks(b);
  return pearson_corr(ra, rb);
}

double correlation(CorrelationKind kind, std::span<const double> a,
                   std::span<const double> b) {
  return kind == CorrelationKind::kPearson ? pearson_corr(a, b)
                                           : spearman_corr(a, b);
}

void validate(const GraphParams& params) {
  if (!(params.exponent_scale > 0.0)) {
    throw InvalidConfig("graph parameter A (exponent scale) must be > 0");
  }
  if (!(params.correlation_threshold >= -1.0 &&
        params.correlation_threshold <= 1.0)) {
    throw InvalidConfig(
        "graph parameter B (correlation threshold) must be in [-1, 1]");
  }
}

double edge_weight(double corr, const GraphParams& params) {
  if (corr < params.correlation_threshold) return 0.0;
  return std::exp(corr * corr / params.exponent_scale);
}

WeightedGraph::WeightedGraph(Matrix adjacency) : adjacency_(std::move(adjacency)) {
  if (adjacency_.rows() != adjacency_.cols() || adjacency_.rows() == 0) {
    throw DimensionMismatch("adjacency matrix must be square and non-empty");
  }
  const std::size_t n = adjacency_.rows();
  for (std::size_t m = 0; m < n; ++m) {
    if (adjacency_(m, m) != 0.0) {
      throw InvalidData("adjacency diagonal must be zero (no self-loops)");
    }
    for (std::size_t k = m + 1; k < n; ++k) {
      if (adjacency_(m, k) != adjacency_(k, m)) {
        throw InvalidData("adjacency matrix must be exactly symmetric");
      }
      if (!(adjacency_(m, k) >= 0.0) || !std::isfinite(adjacency_(m, k))) {
        throw InvalidData("adjacency weights must be finite and nonnegative");
      }
    }
  }
}

WeightedGraph build_similarity_graph(const MarkMatrix& marks,
                                     const GraphParams& params,
                                     CorrelationKind kind) {
  validate(params);
  const std::size_t n = marks.num_students();
  Matrix w(n, n, 0.0);
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t k = m + 1; k < n; ++k) {
      const double corr =
          correlation(kind, marks.student_marks(m), marks.student_marks(k));
      const double weight = edge_weight(corr, params);
      w(m, k) = weight;
      w(k, m) = weight;
    }
  }
  return WeightedGraph(std::move(w));
}

std::vector<double> degree_vector(const WeightedGraph& graph) {
  const std::size_t n = graph.size();
  std::vector<double> degrees(n, 0.0);
  for (std::size_t m = 0; m < n; ++m) {
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) sum += graph.weight(m, k);
    degrees[m] = sum;
  }
  return degrees;
}

}  // namespace groupforge
