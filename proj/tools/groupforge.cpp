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

// groupforge: fair, skill-diverse group formation from course marks.
//
//   groupforge embed     --marks marks.csv --out-dir out
//   groupforge partition --marks marks.csv --attrs attrs.csv --fl 5 --fu 5 \
//                        --balance gender=1 --out-dir out
//   groupforge compare   --marks marks.csv --attrs attrs.csv --fl 5 --fu 5 \
//                        --sample 10 --seed 7 --out-dir out
//   groupforge synth     --spec cohort.json --seed 42 --out-dir out
//
// Exit codes: 0 success, 1 input/config error, 2 infeasible, 3 timeout.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "groupforge/csv.hpp"
#include "groupforge/errors.hpp"
#include "groupforge/pipeline.hpp"

namespace {

using groupforge::PipelineConfig;

// Raw flag values; only flags the user actually passed override the config
// file, so every option collects into an optional.
struct FlagValues {
  std::optional<std::string> config_path;
  std::optional<double> exponent_scale;
  std::optional<double> correlation_threshold;
  std::optional<std::size_t> embedding_dim;
  std::optional<int> min_group_size;
  std::optional<int> max_group_size;
  std::vector<std::string> balance;
  std::optional<std::string> sense;
  std::optional<std::string> correlation;
  std::optional<std::uint64_t> seed;
  std::optional<double> time_budget_s;
  std::optional<int> workers;
  std::optional<std::size_t> sample;
  bool dump_graph = false;
  bool dump_embedding = false;
};

void add_common_flags(CLI::App* cmd, FlagValues& flags) {
  cmd->add_option("--config", flags.config_path,
                  "JSON config file; flags override its keys");
  cmd->add_option("--A", flags.exponent_scale,
                  "similarity exponent scale (default 10)");
  cmd->add_option("--B", flags.correlation_threshold,
                  "correlation threshold for an edge (default 0.5)");
  cmd->add_option("--M", flags.embedding_dim,
                  "embedding dimension (default 3)");
  cmd->add_option("--correlation", flags.correlation,
                  "correlation kind: pearson|spearman (default pearson)");
  cmd->add_option("--seed", flags.seed, "random seed (synth, --sample)");
}

void add_partition_flags(CLI::App* cmd, FlagValues& flags) {
  cmd->add_option("--fl", flags.min_group_size, "group size lower bound F_L");
  cmd->add_option("--fu", flags.max_group_size, "group size upper bound F_U");
  cmd->add_option("--balance", flags.balance,
                  "balance lower bound, attr=B_L (repeatable)");
  cmd->add_option("--sense", flags.sense, "objective sense: max|min");
  cmd->add_option("--sample", flags.sample,
                  "partition only a random subsample of this size");
  cmd->add_option("--time-budget", flags.time_budget_s,
                  "solver wall-clock budget in seconds (default 60)");
  cmd->add_option("--workers", flags.workers,
                  "solver worker threads (default 1)");
  cmd->add_flag("--dump-graph", flags.dump_graph,
                "also write the similarity matrix as w_matrix.csv");
  cmd->add_flag("--dump-embedding", flags.dump_embedding,
                "also write embedding.csv and eigenvalues.csv");
}

PipelineConfig build_config(const FlagValues& flags) {
  PipelineConfig config;
  if (flags.config_path) {
    std::ifstream in(*flags.config_path);
    if (!in) {
      throw groupforge::MissingFile("cannot open config file: " +
                                    *flags.config_path);
    }
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw groupforge::InvalidConfig(std::string("malformed config JSON: ") +
                                      e.what());
    }
    groupforge::apply_json_config(config, j);
  }
  if (flags.exponent_scale) config.exponent_scale = *flags.exponent_scale;
  if (flags.correlation_threshold) {
    config.correlation_threshold = *flags.correlation_threshold;
  }
  if (flags.embedding_dim) config.embedding_dim = *flags.embedding_dim;
  if (flags.min_group_size) config.min_group_size = *flags.min_group_size;
  if (flags.max_group_size) config.max_group_size = *flags.max_group_size;
  if (!flags.balance.empty()) {
    config.balance_bounds.clear();
    for (const auto& spec : flags.balance) {
      const std::size_t eq = spec.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw groupforge::InvalidConfig("--balance expects attr=B_L, got '" +
                                        spec + "'");
      }
      const auto value = groupforge::parse_double(spec.substr(eq + 1));
      if (!value) {
        throw groupforge::InvalidConfig("--balance value is not a number: '" +
                                        spec + "'");
      }
      config.balance_bounds.push_back({spec.substr(0, eq), *value});
    }
  }
  if (flags.sense) {
    if (*flags.sense == "max") {
      config.sense = groupforge::Sense::kMaximize;
    } else if (*flags.sense == "min") {
      config.sense = groupforge::Sense::kMinimize;
    } else {
      throw groupforge::InvalidConfig("--sense must be max or min, got '" +
                                      *flags.sense + "'");
    }
  }
  if (flags.correlation) {
    if (*flags.correlation == "pearson") {
      config.correlation = groupforge::CorrelationKind::kPearson;
    } else if (*flags.correlation == "spearman") {
      config.correlation = groupforge::CorrelationKind::kSpearman;
    } else {
      throw groupforge::InvalidConfig(
          "--correlation must be pearson or spearman");
    }
  }
  if (flags.seed) config.seed = *flags.seed;
  if (flags.time_budget_s) config.time_budget_s = *flags.time_budget_s;
  if (flags.workers) config.workers = *flags.workers;
  if (flags.sample) config.sample_size = *flags.sample;
  config.dump_graph = flags.dump_graph;
  config.dump_embedding = flags.dump_embedding;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"groupforge: fair, skill-diverse group formation"};
  app.require_subcommand(1);

  FlagValues flags;
  std::string marks_path;
  std::string attrs_path;
  std::string spec_path;
  std::string out_dir = "out";

  CLI::App* embed = app.add_subcommand(
      "embed", "compute the spectral embedding of a cohort");
  embed->add_option("--marks", marks_path, "marks CSV")->required();
  embed->add_option("--out-dir", out_dir, "output directory (default: out)");
  add_common_flags(embed, flags);
  embed->add_flag("--dump-graph", flags.dump_graph,
                  "also write the similarity matrix as w_matrix.csv");

  CLI::App* partition = app.add_subcommand(
      "partition", "form groups by exact constrained partitioning");
  partition->add_option("--marks", marks_path, "marks CSV")->required();
  partition->add_option("--attrs", attrs_path, "attributes CSV");
  partition->add_option("--out-dir", out_dir, "output directory (default: out)");
  add_common_flags(partition, flags);
  add_partition_flags(partition, flags);

  CLI::App* compare = app.add_subcommand(
      "compare", "run the min / max / max+balance comparison");
  compare->add_option("--marks", marks_path, "marks CSV")->required();
  compare->add_option("--attrs", attrs_path, "attributes CSV");
  compare->add_option("--out-dir", out_dir, "output directory (default: out)");
  add_common_flags(compare, flags);
  add_partition_flags(compare, flags);

  CLI::App* synth = app.add_subcommand(
      "synth", "generate a synthetic cohort from an affinity spec");
  synth->add_option("--spec", spec_path, "affinity spec JSON")->required();
  synth->add_option("--out-dir", out_dir, "output directory (default: out)");
  add_common_flags(synth, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : groupforge::kExitInputError;
  }

  try {
    const PipelineConfig config = build_config(flags);
    const std::optional<std::filesystem::path> attrs =
        attrs_path.empty() ? std::nullopt
                           : std::optional<std::filesystem::path>(attrs_path);
    if (embed->parsed()) {
      return groupforge::cmd_embed(marks_path, out_dir, config, std::cerr);
    }
    if (partition->parsed()) {
      return groupforge::cmd_partition(marks_path, attrs, out_dir, config,
                                       std::cerr);
    }
    if (compare->parsed()) {
      return groupforge::cmd_compare(marks_path, attrs, out_dir, config,
                                     std::cerr);
    }
    if (synth->parsed()) {
      return groupforge::cmd_synth(spec_path, out_dir, config, std::cerr);
    }
  } catch (const groupforge::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return groupforge::kExitInputError;
  }
  return groupforge::kExitInputError;
}
