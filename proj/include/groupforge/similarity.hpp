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

#ifndef GROUPFORGE_SIMILARITY_HPP
#define GROUPFORGE_SIMILARITY_HPP

#include <span>
#include <vector>

#include "groupforge/cohort.hpp"
#include "groupforge/matrix.hpp"

namespace groupforge {

enum class CorrelationKind { kPearson, kSpearman };

/// Pearson product-moment correlation, clamped to [-1, 1]. A zero-variance
/// input yields 0 by convention: a student with constant marks expresses no
/// relative affinity. Throws LengthMismatch unless both spans have the same
/// length >= 2.
double pearson_corr(std::span<const double> a, std::span<const double> b);

/// Spearman rank correlation (Pearson on fractional ranks, ties averaged).
double spearman_corr(std::span<const double> a, std::span<const double> b);

double correlation(CorrelationKind kind, std::span<const double> a,
                   std::span<const double> b);

/// Similarity-kernel constants: weight = exp(corr^2 / exponent_scale) when
/// corr >= correlation_threshold, else 0.
struct GraphParams {
  double exponent_scale = 10.0;        // A
  double correlation_threshold = 0.5;  // B
};

/// Throws InvalidConfig unless exponent_scale > 0 and the threshold is a
/// valid correlation in [-1, 1].
void validate(const GraphParams& params);

/// Kernel applied to a single correlation value. Thresholding is on the
/// signed correlation, as the weight formula squares it: strongly negative
/// correlations get weight 0, not a large weight.
double edge_weight(double corr, const GraphParams& params);

/// Symmetric nonnegative student-similarity graph. Zero diagonal.
class WeightedGraph {
 public:
  explicit WeightedGraph(Matrix adjacency);

  std::size_t size() const { return adjacency_.rows(); }
  double weight(std::size_t m, std::size_t n) const { return adjacency_(m, n); }
  const Matrix& adjacency() const { return adjacency_; }

 private:
  Matrix adjacency_;
};

/// Builds the similarity graph over all student pairs. Each pair is computed
/// once and mirrored, so the adjacency is symmetric bit-for-bit.
WeightedGraph build_similarity_graph(const MarkMatrix& marks,
                                     const GraphParams& params,
                                     CorrelationKind kind = CorrelationKind::kPearson);

/// Row sums of the adjacency matrix.
std::vector<double> degree_vector(const WeightedGraph& graph);

}  // namespace groupforge

#endif  // GROUPFORGE_SIMILARITY_HPP
