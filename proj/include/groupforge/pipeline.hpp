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

#ifndef GROUPFORGE_PIPELINE_HPP
#define GROUPFORGE_PIPELINE_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>

#include <json.hpp>

#include "groupforge/partition.hpp"
#include "groupforge/similarity.hpp"

namespace groupforge {

/// Configuration of the full pipeline. Defaults follow the reference
/// parameter choices (A = 10, B = 0.5, M = 3).
struct PipelineConfig {
  double exponent_scale = 10.0;        // A
  double correlation_threshold = 0.5;  // B
  std::size_t embedding_dim = 3;       // M
  std::optional<int> min_group_size;   // F_L, required for partitioning
  std::optional<int> max_group_size;   // F_U, required for partitioning
  std::vector<BalanceConstraint> balance_bounds;
  Sense sense = Sense::kMaximize;
  CorrelationKind correlation = CorrelationKind::kPearson;
  std::optional<std::uint64_t> seed;   // synth + subsampling
  double time_budget_s = 60.0;
  int workers = 1;
  std::optional<std::size_t> sample_size;
  bool dump_graph = false;
  bool dump_embedding = false;
  char delimiter = ',';
};

/// Applies a flat JSON config object (keys A, B, M, F_L, F_U,
/// balance_bounds, sense, correlation_kind, seed, time_budget_s, workers,
/// sample). Unknown keys or wrong types throw InvalidConfig.
void apply_json_config(PipelineConfig& config, const nlohmann::json& json);

// Exit codes, stable for scripting.
inline constexpr int kExitOk = 0;            // success / proven optimal
inline constexpr int kExitInputError = 1;    // input or config error
inline constexpr int kExitInfeasible = 2;    // constraints cannot be met
inline constexpr int kExitTimeout = 3;       // budget hit, incumbent written

/// Embeds a cohort and writes embedding.csv + eigenvalues.csv.
int cmd_embed(const std::filesystem::path& marks_path,
              const std::filesystem::path& out_dir, const PipelineConfig& config,
              std::ostream& diag);

/// Full pipeline: embed, (optionally) subsample, solve, report. Writes
/// solution.json, report.json and report.csv.
int cmd_partition(const std::filesystem::path& marks_path,
                  const std::optional<std::filesystem::path>& attrs_path,
                  const std::filesystem::path& out_dir,
                  const PipelineConfig& config, std::ostream& diag);

/// Runs the three comparison scenarios (minimize; maximize unconstrained;
/// maximize with balance) and writes a side-by-side report.
int cmd_compare(const std::filesystem::path& marks_path,
                const std::optional<std::filesystem::path>& attrs_path,
                const std::filesystem::path& out_dir,
                const PipelineConfig& config, std::ostream& diag);

/// Generates a synthetic cohort from an affinity-spec JSON file and writes
/// marks_synth.csv + labels.csv.
int cmd_synth(const std::filesystem::path& spec_path,
              const std::filesystem::path& out_dir, const PipelineConfig& config,
              std::ostream& diag);

}  // namespace groupforge

#endif  // GROUPFORGE_PIPELINE_HPP
