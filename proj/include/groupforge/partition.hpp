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

#ifndef GROUPFORGE_PARTITION_HPP
#define GROUPFORGE_PARTITION_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "groupforge/cohort.hpp"
#include "groupforge/matrix.hpp"
#include "groupforge/spectral.hpp"

namespace groupforge {

/// Pairwise dissimilarity of the fully connected partition graph: symmetric,
/// nonnegative, zero diagonal.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(Matrix values);

  std::size_t size() const { return values_.rows(); }
  double operator()(std::size_t m, std::size_t n) const { return values_(m, n); }
  const Matrix& values() const { return values_; }

 private:
  Matrix values_;
};

/// Euclidean distances between spectral vectors: d_mn = ||q_m - q_n||_2.
/// A large distance indicates a pair with different course affinities.
DistanceMatrix distance_matrix(const SpectralEmbedding& embedding);

/// Same, over the rows of a raw coordinate matrix.
DistanceMatrix distance_matrix(const Matrix& coordinates);

enum class Sense { kMaximize, kMinimize };

struct BalanceConstraint {
  std::string attribute;
  double min_balance = 0.0;  // B_L in [0, 1]
};

/// Fair, size-bounded graph-partition instance. Group count is not an input;
/// it emerges from n and the size bounds.
struct PartitionProblem {
  DistanceMatrix distances;
  int min_group_size = 1;  // F_L
  int max_group_size = 1;  // F_U
  std::vector<BalanceConstraint> balance_bounds;
  std::optional<AttributeTable> attrs;
  Sense sense = Sense::kMaximize;
};

/// Throws InvalidConfig / UnknownAttribute / DimensionMismatch on an
/// ill-formed instance (bounds, balance ranges, missing attribute columns).
void validate_problem(const PartitionProblem& problem);

/// A vertex->group assignment together with the derived edge-indicator
/// vector w (w_mn = 1 iff m and n share a group) and the objective
/// sum d_mn * w_mn. Assignments are canonical: groups are numbered by their
/// minimum member index, so group ids increase with first appearance.
struct PartitionSolution {
  std::vector<int> assignment;
  std::vector<std::uint8_t> edge_indicators;
  double objective = 0.0;
  bool proven_optimal = false;
  std::vector<std::vector<int>> groups;
};

/// Flat index of the unordered pair {m, n}, m < n, in an n-vertex complete
/// graph (row-major over the strict upper triangle).
std::size_t pair_index(std::size_t m, std::size_t n, std::size_t num_vertices);

/// Edge-indicator vector of an assignment; satisfies every triangle
/// inequality by construction.
std::vector<std::uint8_t> edge_vector(std::span<const int> assignment);

/// sum over pairs of d_mn * w_mn; linear in both arguments.
double objective_value(std::span<const std::uint8_t> edge_indicators,
                       const DistanceMatrix& distances);

struct Feasibility {
  bool feasible = false;
  std::string reason;  // empty when feasible
};

/// Pre-flight necessary conditions: (i) n admits a composition into parts in
/// [F_L, F_U]; (ii) per constrained attribute, some size composition has
/// count windows that can sum to the attribute's population count (dynamic
/// program over sizes and counts).
Feasibility feasibility_check(const PartitionProblem& problem);

struct SolverOptions {
  double time_budget_s = 60.0;
  int workers = 1;
};

/// Exact branch-and-bound over vertex assignments in fixed index order.
/// Returns a provably optimal solution with canonical tie-breaking
/// (lexicographically smallest assignment vector among optima, 1e-9
/// objective tolerance). On timeout the best incumbent is returned with
/// proven_optimal = false. Throws InfeasibleProblem when no partition
/// satisfies the constraints.
PartitionSolution solve_exact(const PartitionProblem& problem,
                              const SolverOptions& options = {});

/// Test oracle: enumerates every set partition (restricted growth strings),
/// filters by the constraints and returns the optimum under the same
/// canonical tie-break as solve_exact. Guarded to n <= 12 (TooLarge).
PartitionSolution brute_force_oracle(const PartitionProblem& problem);

/// Number of partitions satisfying the size and balance constraints
/// (same n <= 12 guard as the oracle).
std::size_t count_feasible_partitions(const PartitionProblem& problem);

/// Independent validator: re-checks triangle closure of w, group-size
/// bounds, binariness, balance lower bounds (directly via balance(), with
/// 1e-9 slack) and the objective value. Throws InvalidData on any violation.
void validate_solution(const PartitionProblem& problem,
                       const PartitionSolution& solution);

}  // namespace groupforge

#endif  // GROUPFORGE_PARTITION_HPP
