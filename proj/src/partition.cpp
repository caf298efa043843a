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

#include "groupforge/partition.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include "groupforge/errors.hpp"
#include "groupforge/fairness.hpp"

namespace groupforge {

namespace {

// Objective comparisons declare an improvement only beyond this tolerance;
// candidates within it are ties and the first one in lexicographic
// assignment order wins.
constexpr double kObjectiveTol = 1e-9;

bool improves(Sense sense, double candidate, double best) {
  return sense == Sense::kMaximize ? candidate > best + kObjectiveTol
                                   : candidate < best - kObjectiveTol;
}

bool improves_raw(Sense sense, double candidate, double best) {
  return sense == Sense::kMaximize ? candidate > best : candidate < best;
}

double sentinel(Sense sense) {
  return sense == Sense::kMaximize ? -std::numeric_limits<double>::infinity()
                                   : std::numeric_limits<double>::infinity();
}

/// Objective recomputed from scratch in fixed pair order (m < n ascending).
/// Both the solver and the oracle score leaves with this, so equal
/// partitions produce bit-identical objectives.
double canonical_objective(std::span<const int> assignment, const Matrix& d) {
  const std::size_t n = assignment.size();
  double sum = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t k = m + 1; k < n; ++k) {
      if (assignment[m] == assignment[k]) sum += d(m, k);
    }
  }
  return sum;
}

/// One balance constraint prepared for search: attribute bits, population
/// count, and the admissible-count window for every feasible group size.
struct ConstrainedAttr {
  std::string name;
  std::vector<std::uint8_t> bits;
  double population_ratio = 0.0;
  int total = 0;
  double min_balance = 0.0;
  std::vector<std::optional<CountWindow>> window_by_size;  // index = size
};

/// Builds search-ready constraints. Bounds with B_L = 0 are vacuous and
/// dropped; attributes with population ratio exactly 0 or 1 carry no
/// fairness content (every group trivially matches the population) and are
/// skipped as well.
std::vector<ConstrainedAttr> build_constraints(const PartitionProblem& p) {
  std::vector<ConstrainedAttr> out;
  if (!p.attrs) return out;
  const std::size_t n = p.distances.size();
  for (const auto& bound : p.balance_bounds) {
    if (bound.min_balance == 0.0) continue;
    const auto col = p.attrs->column(bound.attribute);
    ConstrainedAttr attr;
    attr.name = bound.attribute;
    attr.bits.assign(col.begin(), col.end());
    attr.total = 0;
    for (std::uint8_t b : attr.bits) attr.total += b;
    attr.population_ratio =
        static_cast<double>(attr.total) / static_cast<double>(n);
    if (attr.population_ratio == 0.0 || attr.population_ratio == 1.0) continue;
    attr.min_balance = bound.min_balance;
    attr.window_by_size.resize(static_cast<std::size_t>(p.max_group_size) + 1);
    for (int g = 1; g <= p.max_group_size; ++g) {
      attr.window_by_size[g] =
          count_window(g, attr.population_ratio, attr.min_balance);
    }
    out.push_back(std::move(attr));
  }
  return out;
}

struct PairEntry {
  double d = 0.0;
  int m = 0;
  int n = 0;
};

/// All unordered pairs sorted by distance: descending for Maximize,
/// ascending for Minimize, equal distances in pair-index order.
std::vector<PairEntry> sorted_pairs(const Matrix& d, Sense sense) {
  const std::size_t n = d.rows();
  std::vector<PairEntry> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t k = m + 1; k < n; ++k) {
      pairs.push_back({d(m, k), static_cast<int>(m), static_cast<int>(k)});
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [sense](const PairEntry& a, const PairEntry& b) {
                     return sense == Sense::kMaximize ? a.d > b.d : a.d < b.d;
                   });
  return pairs;
}

struct SearchShared {
  const Matrix* dist = nullptr;
  std::size_t n = 0;
  int min_size = 1;
  int max_size = 1;
  Sense sense = Sense::kMaximize;
  std::vector<ConstrainedAttr> attrs;
  std::vector<PairEntry> pairs;  // sorted per sense
  bool has_deadline = false;
  std::chrono::steady_clock::time_point deadline;
  std::atomic<double>* global_best = nullptr;
  std::atomic<bool>* timed_out = nullptr;
};

/// Greatest number of not-yet-scored intra-group pairs any completion can
/// create: the marginal gain of adding a student to a group of size s is s,
/// so repeatedly growing the largest non-full group is optimal (the gain
/// sequences per group are increasing, making concentration dominate).
/// Lower-bound constraints are ignored, which only enlarges the candidate
/// set, keeping the count admissible as an upper bound.
long max_additional_pairs(const std::vector<int>& sizes, long remaining,
                          int max_size) {
  std::vector<int> work(sizes);
  long pairs = 0;
  for (long step = 0; step < remaining; ++step) {
    int best = -1;
    for (std::size_t j = 0; j < work.size(); ++j) {
      if (work[j] < max_size && (best < 0 || work[j] > work[best])) {
        best = static_cast<int>(j);
      }
    }
    if (best < 0) {
      work.push_back(1);  // open a fresh group, gain 0
      continue;
    }
    pairs += work[best];
    ++work[best];
  }
  return pairs;
}

/// Fewest intra-group pairs any feasible completion must create: each group
/// below the size floor must grow to it (gains s, s+1, ...), and students
/// beyond the capacity of existing groups must open new groups of at least
/// the floor size.
long min_additional_pairs(const std::vector<int>& sizes, long remaining,
                          int min_size, int max_size) {
  long forced = 0;
  long deficit = 0;
  long spare_after_fill = 0;
  for (int s : sizes) {
    const long need = std::max(0, min_size - s);
    forced += need * s + need * (need - 1) / 2;
    deficit += need;
    spare_after_fill += max_size - std::max(s, min_size);
  }
  const long excess = remaining - deficit;
  if (excess > spare_after_fill) {
    const long overflow = excess - spare_after_fill;
    const long new_groups = (overflow + max_size - 1) / max_size;
    forced += new_groups * (static_cast<long>(min_size) * (min_size - 1) / 2);
  }
  return forced;
}

/// Sum of the first `count` pairs (in the shared sense-sorted order) that are
/// still undecided given that exactly the students [0, next_vertex) are
/// assigned.
double extreme_undecided_sum(const SearchShared& sh, std::size_t next_vertex,
                             long count) {
  double sum = 0.0;
  long taken = 0;
  for (const auto& e : sh.pairs) {
    if (taken >= count) break;
    if (static_cast<std::size_t>(e.m) >= next_vertex ||
        static_cast<std::size_t>(e.n) >= next_vertex) {
      sum += e.d;
      ++taken;
    }
  }
  return sum;
}

class Searcher {
 public:
  explicit Searcher(const SearchShared& shared) : sh_(shared) {
    assignment_.assign(sh_.n, -1);
    attr_counts_.resize(sh_.attrs.size());
  }

  /// Replays a partial assignment (students 0..prefix.size()-1) and explores
  /// the subtree below it.
  void run_from_prefix(std::span<const int> prefix) {
    double prefix_sum = 0.0;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
      const int gid = prefix[i];
      if (gid == num_groups_) open_group();
      prefix_sum += place(i, gid);
    }
    dfs(prefix.size(), prefix_sum);
  }

  /// Children of a prefix in exploration order, filtered by the
  /// objective-independent feasibility prunes. Used to build the frontier.
  std::vector<int> feasible_children(std::span<const int> prefix) {
    double prefix_sum = 0.0;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
      const int gid = prefix[i];
      if (gid == num_groups_) open_group();
      prefix_sum += place(i, gid);
    }
    std::vector<int> children;
    const std::size_t i = prefix.size();
    if (i >= sh_.n) return children;
    const int open = num_groups_;
    for (int gid = 0; gid <= open; ++gid) {
      const bool fresh = (gid == open);
      if (!fresh && sizes_[gid] >= sh_.max_size) continue;
      if (fresh) open_group();
      place(i, gid);
      if (completion_possible(i + 1)) children.push_back(gid);
      unplace(i, gid);
      if (fresh) close_group();
    }
    return children;
  }

  bool found() const { return has_best_; }
  double best_objective() const { return best_objective_; }
  const std::vector<int>& best_assignment() const { return best_assignment_; }
  bool hit_timeout() const { return stop_; }

 private:
  void open_group() {
    members_.emplace_back();
    sizes_.push_back(0);
    for (auto& counts : attr_counts_) counts.push_back(0);
    ++num_groups_;
  }

  void close_group() {
    members_.pop_back();
    sizes_.pop_back();
    for (auto& counts : attr_counts_) counts.pop_back();
    --num_groups_;
  }

  /// Adds student i to group gid (which must exist); returns the objective
  /// delta, i.e. the distances from i to the current members.
  double place(std::size_t i, int gid) {
    double delta = 0.0;
    for (int m : members_[gid]) delta += (*sh_.dist)(m, i);
    assignment_[i] = gid;
    members_[gid].push_back(static_cast<int>(i));
    ++sizes_[gid];
    for (std::size_t a = 0; a < sh_.attrs.size(); ++a) {
      attr_counts_[a][gid] += sh_.attrs[a].bits[i];
    }
    return delta;
  }

  void unplace(std::size_t i, int gid) {
    assignment_[i] = -1;
    members_[gid].pop_back();
    --sizes_[gid];
    for (std::size_t a = 0; a < sh_.attrs.size(); ++a) {
      attr_counts_[a][gid] -= sh_.attrs[a].bits[i];
    }
  }

  /// Necessary conditions for any completion of the current partial
  /// assignment (students [0, next_vertex) placed). These prunes are
  /// objective-independent.
  bool completion_possible(std::size_t next_vertex) const {
    const long remaining = static_cast<long>(sh_.n - next_vertex);

    // (a) group sizes: some number of fresh groups must make the deficit
    // and capacity bracket the remaining student count.
    long deficit = 0;
    long capacity = 0;
    for (int s : sizes_) {
      deficit += std::max(0, sh_.min_size - s);
      capacity += sh_.max_size - s;
    }
    bool size_ok = false;
    for (long fresh = 0;; ++fresh) {
      const long need = deficit + fresh * sh_.min_size;
      const long cap = capacity + fresh * sh_.max_size;
      if (need > remaining) break;
      if (remaining <= cap) {
        size_ok = true;
        break;
      }
    }
    if (!size_ok) return false;

    // (b) balance windows: every open group must still be able to finish at
    // some size whose admissible count range is reachable.
    for (std::size_t a = 0; a < sh_.attrs.size(); ++a) {
      const auto& attr = sh_.attrs[a];
      for (int gid = 0; gid < num_groups_; ++gid) {
        const int s = sizes_[gid];
        const int t = attr_counts_[a][gid];
        const int g_min = std::max(s, sh_.min_size);
        const int g_max =
            static_cast<int>(std::min<long>(sh_.max_size, s + remaining));
        bool possible = false;
        for (int g = g_min; g <= g_max; ++g) {
          const auto& window = attr.window_by_size[g];
          if (!window) continue;
          const int lo = std::max(window->lo, t);
          const int hi = std::min(window->hi, t + (g - s));
          if (lo <= hi) {
            possible = true;
            break;
          }
        }
        if (!possible) return false;
      }
    }
    return true;
  }

  /// Admissible objective bound for completions of the current node.
  /// Returns true when the subtree cannot beat the incumbent(s).
  bool bound_prunes(std::size_t next_vertex, double current_sum) const {
    const long remaining = static_cast<long>(sh_.n - next_vertex);
    double bound;
    if (sh_.sense == Sense::kMaximize) {
      const long p = max_additional_pairs(sizes_, remaining, sh_.max_size);
      bound = current_sum + extreme_undecided_sum(sh_, next_vertex, p);
    } else {
      const long p =
          min_additional_pairs(sizes_, remaining, sh_.min_size, sh_.max_size);
      bound = current_sum + extreme_undecided_sum(sh_, next_vertex, p);
    }
    if (has_best_ && !improves(sh_.sense, bound, best_objective_)) return true;
    if (sh_.global_best != nullptr) {
      // Other workers' incumbents prune only with a full tolerance margin,
      // so equal-objective (tie) subtrees are never lost to a race.
      const double global = sh_.global_best->load(std::memory_order_relaxed);
      if (sh_.sense == Sense::kMaximize ? bound < global - kObjectiveTol
                                        : bound > global + kObjectiveTol) {
        return true;
      }
    }
    return false;
  }

  void accept_leaf() {
    for (int gid = 0; gid < num_groups_; ++gid) {
      if (sizes_[gid] < sh_.min_size) return;
    }
    for (std::size_t a = 0; a < sh_.attrs.size(); ++a) {
      const auto& attr = sh_.attrs[a];
      for (int gid = 0; gid < num_groups_; ++gid) {
        const auto& window = attr.window_by_size[sizes_[gid]];
        if (!window) return;
        const int t = attr_counts_[a][gid];
        if (t < window->lo || t > window->hi) return;
      }
    }
    const double objective = canonical_objective(assignment_, *sh_.dist);
    if (!has_best_ || improves(sh_.sense, objective, best_objective_)) {
      has_best_ = true;
      best_objective_ = objective;
      best_assignment_ = assignment_;
      if (sh_.global_best != nullptr) {
        double current = sh_.global_best->load(std::memory_order_relaxed);
        while (improves_raw(sh_.sense, objective, current) &&
               !sh_.global_best->compare_exchange_weak(current, objective)) {
        }
      }
    }
  }

  void dfs(std::size_t i, double current_sum) {
    if (stop_) return;
    if ((++nodes_ & 0x3FF) == 0 && sh_.has_deadline &&
        std::chrono::steady_clock::now() >= sh_.deadline) {
      stop_ = true;
      if (sh_.timed_out != nullptr) {
        sh_.timed_out->store(true, std::memory_order_relaxed);
      }
      return;
    }
    if (i == sh_.n) {
      accept_leaf();
      return;
    }
    const int open = num_groups_;
    for (int gid = 0; gid <= open && !stop_; ++gid) {
      const bool fresh = (gid == open);
      if (!fresh && sizes_[gid] >= sh_.max_size) continue;
      if (fresh) open_group();
      const double delta = place(i, gid);
      const double sum = current_sum + delta;
      if (completion_possible(i + 1) && !bound_prunes(i + 1, sum)) {
        dfs(i + 1, sum);
      }
      unplace(i, gid);
      if (fresh) close_group();
    }
  }

  const SearchShared& sh_;
  std::vector<int> assignment_;
  std::vector<std::vector<int>> members_;
  std::vector<int> sizes_;
  std::vector<std::vector<int>> attr_counts_;  // [attr][group]
  int num_groups_ = 0;

  bool has_best_ = false;
  double best_objective_ = 0.0;
  std::vector<int> best_assignment_;

  std::uint64_t nodes_ = 0;
  bool stop_ = false;
};

PartitionSolution build_solution(std::vector<int> assignment,
                                 const DistanceMatrix& distances,
                                 bool proven_optimal) {
  PartitionSolution sol;
  sol.edge_indicators = edge_vector(assignment);
  sol.objective = canonical_objective(assignment, distances.values());
  sol.proven_optimal = proven_optimal;
  int num_groups = 0;
  for (int g : assignment) num_groups = std::max(num_groups, g + 1);
  sol.groups.resize(num_groups);
  for (std::size_t m = 0; m < assignment.size(); ++m) {
    sol.groups[assignment[m]].push_back(static_cast<int>(m));
  }
  sol.assignment = std::move(assignment);
  return sol;
}

}  // namespace

DistanceMatrix::DistanceMatrix(Matrix values) : values_(std::move(values)) {
  if (values_.rows() != values_.cols() || values_.rows() == 0) {
    throw DimensionMismatch("distance matrix must be square and non-empty");
  }
  const std::size_t n = values_.rows();
  for (std::size_t m = 0; m < n; ++m) {
    if (values_(m, m) != 0.0) {
      throw InvalidData("distance matrix diagonal must be zero");
    }
    for (std::size_t k = m + 1; k < n; ++k) {
      if (values_(m, k) != values_(k, m)) {
        throw InvalidData("distance matrix must be exactly symmetric");
      }
      if (!(values_(m, k) >= 0.0) || !std::isfinite(values_(m, k))) {
        throw InvalidData("distances must be finite and nonnegative");
      }
    }
  }
}

DistanceMatrix distance_matrix(const SpectralEmbedding& embedding) {
  return distance_matrix(embedding.coordinates);
}

DistanceMatrix distance_matrix(const Matrix& q) {
  const std::size_t n = q.rows();
  Matrix d(n, n, 0.0);
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t k = m + 1; k < n; ++k) {
      double sum = 0.0;
      for (std::size_t j = 0; j < q.cols(); ++j) {
        const double diff = q(m, j) - q(k, j);
        sum += diff * diff;
      }
      const double dist = std::sqrt(sum);
      d(m, k) = dist;
      d(k, m) = dist;
    }
  }
  return DistanceMatrix(std::move(d));
}

std::size_t pair_index(std::size_t m, std::size_t n, std::size_t num_vertices) {
  if (m > n) std::swap(m, n);
  return m * num_vertices - m * (m + 1) / 2 + (n - m - 1);
}

std::vector<std::uint8_t> edge_vector(std::span<const int> assignment) {
  const std::size_t n = assignment.size();
  std::vector<std::uint8_t> w(n * (n - 1) / 2, 0);
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t k = m + 1; k < n; ++k) {
      w[pair_index(m, k, n)] = assignment[m] == assignment[k] ? 1 : 0;
    }
  }
  return w;
}

double objective_value(std::span<const std::uint8_t> edge_indicators,
                       const DistanceMatrix& distances) {
  const std::size_t n = distances.size();
  if (edge_indicators.size() != n * (n - 1) / 2) {
    throw DimensionMismatch("edge vector length does not match distance matrix");
  }
  double sum = 0.0;
  std::size_t idx = 0;
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t k = m + 1; k < n; ++k, ++idx) {
      if (edge_indicators[idx]) sum += distances(m, k);
    }
  }
  return sum;
}

void validate_problem(const PartitionProblem& problem) {
  const std::size_t n = problem.distances.size();
  if (problem.min_group_size < 1) {
    throw InvalidConfig("group size lower bound F_L must be >= 1");
  }
  if (problem.min_group_size > problem.max_group_size) {
    throw InvalidConfig("group size bounds must satisfy F_L <= F_U");
  }
  if (static_cast<std::size_t>(problem.max_group_size) > n) {
    throw InvalidConfig("group size upper bound F_U cannot exceed n");
  }
  std::vector<std::string_view> seen;
  for (const auto& bound : problem.balance_bounds) {
    if (!(bound.min_balance >= 0.0 && bound.min_balance <= 1.0)) {
      throw InvalidConfig("balance lower bound must be in [0, 1]: " +
                          bound.attribute);
    }
    if (std::find(seen.begin(), seen.end(), bound.attribute) != seen.end()) {
      throw InvalidConfig("duplicate balance bound for attribute " +
                          bound.attribute);
    }
    seen.push_back(bound.attribute);
    if (!problem.attrs) {
      throw InvalidConfig("balance bounds given but no attribute table");
    }
    problem.attrs->column(bound.attribute);  // throws UnknownAttribute
  }
  if (problem.attrs && problem.attrs->num_students() != n) {
    throw DimensionMismatch("attribute table size does not match vertex count");
  }
}

Feasibility feasibility_check(const PartitionProblem& problem) {
  validate_problem(problem);
  const int n = static_cast<int>(problem.distances.size());
  const int fl = problem.min_group_size;
  const int fu = problem.max_group_size;
  const int k_min = (n + fu - 1) / fu;
  const int k_max = n / fl;
  if (k_min > k_max) {
    return {false, "no composition of " + std::to_string(n) +
                       " students into group sizes in [" + std::to_string(fl) +
                       ", " + std::to_string(fu) + "]"};
  }

  for (const auto& attr : build_constraints(problem)) {
    // Reachability of (students placed, attributed placed) via groups of
    // feasible size whose attributed count stays inside its window.
    std::vector<std::vector<char>> reach(
        n + 1, std::vector<char>(attr.total + 1, 0));
    reach[0][0] = 1;
    for (int used = 0; used < n; ++used) {
      for (int count = 0; count <= attr.total; ++count) {
        if (!reach[used][count]) continue;
        for (int g = fl; g <= fu && used + g <= n; ++g) {
          const auto& window = attr.window_by_size[g];
          if (!window) continue;
          const int hi = std::min(window->hi, attr.total - count);
          for (int k = window->lo; k <= hi; ++k) {
            reach[used + g][count + k] = 1;
          }
        }
      }
    }
    if (!reach[n][attr.total]) {
      return {false, "attribute '" + attr.name + "': no composition of group " +
                         "sizes admits its population count " +
                         std::to_string(attr.total) +
                         " within the balance count windows"};
    }
  }
  return {true, ""};
}

PartitionSolution solve_exact(const PartitionProblem& problem,
                              const SolverOptions& options) {
  const Feasibility feasible = feasibility_check(problem);
  if (!feasible.feasible) {
    throw InfeasibleProblem(feasible.reason);
  }

  std::atomic<double> global_best{sentinel(problem.sense)};
  std::atomic<bool> timed_out{false};

  SearchShared shared;
  shared.dist = &problem.distances.values();
  shared.n = problem.distances.size();
  shared.min_size = problem.min_group_size;
  shared.max_size = problem.max_group_size;
  shared.sense = problem.sense;
  shared.attrs = build_constraints(problem);
  shared.pairs = sorted_pairs(problem.distances.values(), problem.sense);
  if (options.time_budget_s > 0.0) {
    shared.has_deadline = true;
    shared.deadline = std::chrono::steady_clock::now() +
                      std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                          std::chrono::duration<double>(options.time_budget_s));
  }
  shared.global_best = &global_best;
  shared.timed_out = &timed_out;

  const int workers = std::max(1, options.workers);

  // Frontier of partial assignments in lexicographic order. Each node is
  // solved independently; merging the per-node optima in frontier order
  // reproduces the sequential result for any worker count.
  std::vector<std::vector<int>> frontier{{}};
  const std::size_t target =
      workers == 1 ? 1 : static_cast<std::size_t>(workers) * 8;
  std::size_t depth = 0;
  const std::size_t max_depth = std::min<std::size_t>(shared.n, 12);
  while (frontier.size() < target && depth < max_depth) {
    std::vector<std::vector<int>> next;
    for (const auto& prefix : frontier) {
      Searcher probe(shared);
      for (int child : probe.feasible_children(prefix)) {
        auto extended = prefix;
        extended.push_back(child);
        next.push_back(std::move(extended));
      }
    }
    frontier = std::move(next);
    ++depth;
    if (frontier.empty()) break;
  }

  struct NodeResult {
    bool found = false;
    double objective = 0.0;
    std::vector<int> assignment;
  };
  std::vector<NodeResult> results(frontier.size());
  std::atomic<std::size_t> cursor{0};

  auto drain = [&]() {
    for (;;) {
      const std::size_t idx = cursor.fetch_add(1);
      if (idx >= frontier.size()) break;
      Searcher searcher(shared);
      searcher.run_from_prefix(frontier[idx]);
      if (searcher.found()) {
        results[idx] = {true, searcher.best_objective(),
                        searcher.best_assignment()};
      }
    }
  };

  const std::size_t thread_count =
      std::min<std::size_t>(workers, std::max<std::size_t>(frontier.size(), 1));
  if (thread_count <= 1) {
    drain();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(thread_count);
    for (std::size_t t = 0; t < thread_count; ++t) pool.emplace_back(drain);
    for (auto& t : pool) t.join();
  }

  bool found = false;
  double best_objective = 0.0;
  std::vector<int> best_assignment;
  for (auto& result : results) {
    if (!result.found) continue;
    if (!found || improves(problem.sense, result.objective, best_objective)) {
      found = true;
      best_objective = result.objective;
      best_assignment = std::move(result.assignment);
    }
  }

  const bool ran_out = timed_out.load();
  if (!found) {
    if (ran_out) {
      throw TimeoutBudgetExceeded(
          "time budget exhausted before any feasible partition was found");
    }
    throw InfeasibleProblem(
        "no feasible partition exists under the given constraints");
  }
  return build_solution(std::move(best_assignment), problem.distances, !ran_out);
}

namespace {

/// Restricted-growth-string enumeration shared by the oracle and the
/// feasible-partition counter. Calls `on_leaf(assignment)` for every
/// partition satisfying the size and balance constraints.
template <typename LeafFn>
void enumerate_feasible(const PartitionProblem& problem, LeafFn&& on_leaf) {
  validate_problem(problem);
  const std::size_t n = problem.distances.size();
  if (n > 12) {
    throw TooLarge("brute-force enumeration is guarded to n <= 12, got n=" +
                   std::to_string(n));
  }
  const int fl = problem.min_group_size;
  const int fu = problem.max_group_size;
  const auto attrs = build_constraints(problem);

  std::vector<int> assignment(n, 0);
  std::vector<int> sizes;
  std::vector<std::vector<int>> counts(attrs.size());

  auto leaf_feasible = [&]() {
    for (std::size_t g = 0; g < sizes.size(); ++g) {
      if (sizes[g] < fl) return false;
    }
    for (std::size_t a = 0; a < attrs.size(); ++a) {
      for (std::size_t g = 0; g < sizes.size(); ++g) {
        const auto& window = attrs[a].window_by_size[sizes[g]];
        if (!window) return false;
        if (counts[a][g] < window->lo || counts[a][g] > window->hi) return false;
      }
    }
    return true;
  };

  auto recurse = [&](auto&& self, std::size_t i) -> void {
    if (i == n) {
      if (leaf_feasible()) on_leaf(std::span<const int>(assignment));
      return;
    }
    const int open = static_cast<int>(sizes.size());
    for (int g = 0; g <= open; ++g) {
      if (g < open && sizes[g] >= fu) continue;
      if (g == open) {
        sizes.push_back(0);
        for (auto& c : counts) c.push_back(0);
      }
      assignment[i] = g;
      ++sizes[g];
      for (std::size_t a = 0; a < attrs.size(); ++a) {
        counts[a][g] += attrs[a].bits[i];
      }
      self(self, i + 1);
      for (std::size_t a = 0; a < attrs.size(); ++a) {
        counts[a][g] -= attrs[a].bits[i];
      }
      --sizes[g];
      if (g == open) {
        sizes.pop_back();
        for (auto& c : counts) c.pop_back();
      }
    }
  };
  recurse(recurse, 0);
}

}  // namespace

PartitionSolution brute_force_oracle(const PartitionProblem& problem) {
  bool found = false;
  double best_objective = 0.0;
  std::vector<int> best_assignment;
  enumerate_feasible(problem, [&](std::span<const int> assignment) {
    const double objective =
        canonical_objective(assignment, problem.distances.values());
    if (!found || improves(problem.sense, objective, best_objective)) {
      found = true;
      best_objective = objective;
      best_assignment.assign(assignment.begin(), assignment.end());
    }
  });
  if (!found) {
    throw InfeasibleProblem(
        "no feasible partition exists under the given constraints");
  }
  return build_solution(std::move(best_assignment), problem.distances, true);
}

std::size_t count_feasible_partitions(const PartitionProblem& problem) {
  std::size_t count = 0;
  enumerate_feasible(problem, [&](std::span<const int>) { ++count; });
  return count;
}

void validate_solution(const PartitionProblem& problem,
                       const PartitionSolution& solution) {
  const std::size_t n = problem.distances.size();
  if (solution.assignment.size() != n) {
    throw InvalidData("solution assignment length does not match n");
  }

  // Canonical numbering: a group id first appears only as (max so far) + 1.
  int max_seen = -1;
  for (int g : solution.assignment) {
    if (g < 0 || g > max_seen + 1) {
      throw InvalidData("assignment is not in canonical group numbering");
    }
    max_seen = std::max(max_seen, g);
  }
  const int num_groups = max_seen + 1;

  // 6d: binariness, and w must be the indicator of the assignment.
  if (solution.edge_indicators.size() != n * (n - 1) / 2) {
    throw InvalidData("edge vector has the wrong length");
  }
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t k = m + 1; k < n; ++k) {
      const std::uint8_t w = solution.edge_indicators[pair_index(m, k, n)];
      if (w != 0 && w != 1) throw InvalidData("edge vector is not binary");
      const bool same = solution.assignment[m] == solution.assignment[k];
      if (static_cast<bool>(w) != same) {
        throw InvalidData("edge vector does not match the assignment");
      }
    }
  }

  // 6a: triangle inequalities directly on w, all three rotations.
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t k = m + 1; k < n; ++k) {
      for (std::size_t o = k + 1; o < n; ++o) {
        const int w_mk = solution.edge_indicators[pair_index(m, k, n)];
        const int w_mo = solution.edge_indicators[pair_index(m, o, n)];
        const int w_ko = solution.edge_indicators[pair_index(k, o, n)];
        if (w_mk + w_mo - w_ko > 1 || w_mk + w_ko - w_mo > 1 ||
            w_mo + w_ko - w_mk > 1) {
          throw InvalidData("triangle inequality violated");
        }
      }
    }
  }

  // 6b/6c: group sizes within bounds; groups list consistent.
  std::vector<int> sizes(num_groups, 0);
  for (int g : solution.assignment) ++sizes[g];
  for (int g = 0; g < num_groups; ++g) {
    if (sizes[g] < problem.min_group_size || sizes[g] > problem.max_group_size) {
      throw InvalidData("group " + std::to_string(g) + " size " +
                        std::to_string(sizes[g]) + " violates bounds");
    }
  }
  if (static_cast<int>(solution.groups.size()) != num_groups) {
    throw InvalidData("groups list does not match assignment");
  }
  for (int g = 0; g < num_groups; ++g) {
    std::vector<int> expected;
    for (std::size_t m = 0; m < n; ++m) {
      if (solution.assignment[m] == g) expected.push_back(static_cast<int>(m));
    }
    if (solution.groups[g] != expected) {
      throw InvalidData("group member list does not match assignment");
    }
  }

  // 6e: balance lower bounds, checked via balance() itself rather than the
  // count windows, so this path is independent of the solver's pruning logic.
  if (problem.attrs) {
    for (const auto& bound : problem.balance_bounds) {
      const double pop = population_ratio(*problem.attrs, bound.attribute);
      for (int g = 0; g < num_groups; ++g) {
        const double ratio =
            group_ratio(solution.assignment, *problem.attrs, bound.attribute, g);
        if (balance(ratio, pop) < bound.min_balance - 1e-9) {
          throw InvalidData("balance of attribute '" + bound.attribute +
                            "' in group " + std::to_string(g) +
                            " violates its lower bound");
        }
      }
    }
  }

  // Objective value (Eq-style linear form over the edge vector).
  const double recomputed =
      objective_value(solution.edge_indicators, problem.distances);
  if (std::abs(recomputed - solution.objective) >
      1e-9 * std::max(1.0, std::abs(recomputed))) {
    throw InvalidData("objective value does not match the edge vector");
  }
}

}  // namespace groupforge
