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

#include "groupforge/pipeline.hpp"

#include <fstream>

#include "groupforge/csv.hpp"
#include "groupforge/errors.hpp"
#include "groupforge/report.hpp"
#include "groupforge/rng.hpp"
#include "groupforge/spectral.hpp"

namespace groupforge {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

GraphParams graph_params(const PipelineConfig& config) {
  return GraphParams{config.exponent_scale, config.correlation_threshold};
}

const char* correlation_name(CorrelationKind kind) {
  return kind == CorrelationKind::kPearson ? "pearson" : "spearman";
}

/// Everything the solver stage needs, after embedding and optional
/// subsampling: the working cohort is the sample when one was drawn.
struct PreparedCohort {
  MarkMatrix marks;
  std::optional<AttributeTable> attrs;
  Matrix coordinates;  // working rows of the spectral embedding
  std::optional<std::vector<std::size_t>> sample_rows;
};

void write_embedding_files(const MarkMatrix& marks,
                           const SpectralEmbedding& embedding,
                           const fs::path& out_dir) {
  std::vector<std::string> lines;
  std::string header = "student_id";
  for (std::size_t j = 1; j <= embedding.dimension; ++j) {
    header += ",q_" + std::to_string(j);
  }
  lines.push_back(std::move(header));
  for (std::size_t m = 0; m < marks.num_students(); ++m) {
    std::string line = marks.student_ids()[m];
    for (std::size_t j = 0; j < embedding.dimension; ++j) {
      line += "," + format_double(embedding.coordinates(m, j));
    }
    lines.push_back(std::move(line));
  }
  write_text_file(out_dir / "embedding.csv", lines);

  std::vector<std::string> eig{"index,eigenvalue"};
  for (std::size_t j = 0; j < embedding.dimension; ++j) {
    eig.push_back(std::to_string(j + 1) + "," +
                  format_double(embedding.retained_eigenvalues[j]));
  }
  write_text_file(out_dir / "eigenvalues.csv", eig);
}

void write_graph_dump(const WeightedGraph& graph, const fs::path& out_dir) {
  std::vector<std::string> lines;
  for (std::size_t m = 0; m < graph.size(); ++m) {
    std::string line;
    for (std::size_t k = 0; k < graph.size(); ++k) {
      if (k > 0) line += ',';
      line += format_double(graph.weight(m, k));
    }
    lines.push_back(std::move(line));
  }
  write_text_file(out_dir / "w_matrix.csv", lines);
}

PreparedCohort prepare_cohort(const fs::path& marks_path,
                              const std::optional<fs::path>& attrs_path,
                              const fs::path& out_dir,
                              const PipelineConfig& config, std::ostream& diag) {
  MarkMatrix marks = load_marks(marks_path, config.delimiter);
  std::optional<AttributeTable> attrs;
  if (attrs_path) {
    attrs = load_attributes(*attrs_path, config.delimiter, marks.student_ids());
  }

  const WeightedGraph graph =
      build_similarity_graph(marks, graph_params(config), config.correlation);
  const SpectralEmbedding embedding = embed(graph, config.embedding_dim);
  if (embedding.zero_eigenvalue_count > 1) {
    diag << "warning: similarity graph is disconnected ("
         << embedding.zero_eigenvalue_count << " zero eigenvalues)\n";
  }
  if (config.dump_graph) write_graph_dump(graph, out_dir);
  if (config.dump_embedding) write_embedding_files(marks, embedding, out_dir);

  if (!config.sample_size) {
    return PreparedCohort{std::move(marks), std::move(attrs),
                          embedding.coordinates, std::nullopt};
  }

  const std::size_t n = marks.num_students();
  const std::size_t k = *config.sample_size;
  if (k < 2 || k > n) {
    throw InvalidConfig("--sample must be between 2 and the cohort size");
  }
  // The eigenmap is built on the full cohort; the sample only restricts the
  // partition stage, mirroring the subsampled-experiment workflow.
  Rng rng(config.seed.value_or(0));
  const auto rows = rng.sample_indices(n, k);
  Matrix coords(k, embedding.dimension);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < embedding.dimension; ++j) {
      coords(i, j) = embedding.coordinates(rows[i], j);
    }
  }
  PreparedCohort prepared{marks.subset(rows),
                          attrs ? std::optional(attrs->subset(rows))
                                : std::nullopt,
                          std::move(coords), rows};
  return prepared;
}

ordered_json config_json(const PipelineConfig& config,
                         const std::vector<BalanceConstraint>& bounds,
                         Sense sense) {
  ordered_json balance = ordered_json::object();
  for (const auto& bound : bounds) {
    balance[bound.attribute] = bound.min_balance;
  }
  ordered_json j{{"A", config.exponent_scale},
                 {"B", config.correlation_threshold},
                 {"M", config.embedding_dim},
                 {"balance_bounds", std::move(balance)},
                 {"sense", sense_name(sense)},
                 {"correlation_kind", correlation_name(config.correlation)}};
  if (config.min_group_size) j["F_L"] = *config.min_group_size;
  if (config.max_group_size) j["F_U"] = *config.max_group_size;
  return j;
}

ordered_json sample_json(const PreparedCohort& prepared,
                         const PipelineConfig& config) {
  if (!prepared.sample_rows) return nullptr;
  return ordered_json{{"size", prepared.sample_rows->size()},
                      {"seed", config.seed.value_or(0)},
                      {"student_ids", prepared.marks.student_ids()}};
}

void write_json(const fs::path& path, const ordered_json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write file: " + path.string());
  out << j.dump(2) << '\n';
}

/// Drops vacuous balance bounds (B_L = 0 or degenerate population ratio),
/// warning about the degenerate ones.
std::vector<BalanceConstraint> effective_bounds(
    const std::vector<BalanceConstraint>& bounds, const AttributeTable& attrs,
    std::ostream& diag) {
  std::vector<BalanceConstraint> kept;
  for (const auto& bound : bounds) {
    const double pop = population_ratio(attrs, bound.attribute);
    if (pop == 0.0 || pop == 1.0) {
      diag << "warning: balance constraint on '" << bound.attribute
           << "' skipped: population ratio is " << format_double(pop)
           << ", every group trivially matches\n";
      continue;
    }
    kept.push_back(bound);
  }
  return kept;
}

struct ScenarioOutcome {
  std::string name;
  Sense sense = Sense::kMaximize;
  int exit_code = kExitOk;
  std::string reason;  // non-empty for infeasible/timeout notes
  std::optional<PartitionSolution> solution;
  std::optional<GroupReport> report;
};

ScenarioOutcome run_scenario(const std::string& name,
                             const PreparedCohort& prepared, Sense sense,
                             const std::vector<BalanceConstraint>& bounds,
                             const PipelineConfig& config, std::ostream& diag) {
  ScenarioOutcome outcome;
  outcome.name = name;
  outcome.sense = sense;
  PartitionProblem problem{distance_matrix(prepared.coordinates),
                           config.min_group_size.value(),
                           config.max_group_size.value(),
                           bounds,
                           prepared.attrs,
                           sense};
  try {
    const PartitionSolution solution = solve_exact(
        problem, SolverOptions{config.time_budget_s, config.workers});
    validate_solution(problem, solution);
    outcome.report = build_group_report(prepared.marks, prepared.attrs,
                                        solution, sense, config.correlation);
    outcome.solution = solution;
    if (!solution.proven_optimal) {
      outcome.exit_code = kExitTimeout;
      outcome.reason = "time budget exceeded; best incumbent reported";
      diag << "warning: scenario " << name << ": " << outcome.reason << "\n";
    }
  } catch (const InfeasibleProblem& e) {
    outcome.exit_code = kExitInfeasible;
    outcome.reason = e.what();
  } catch (const TimeoutBudgetExceeded& e) {
    outcome.exit_code = kExitTimeout;
    outcome.reason = e.what();
  }
  return outcome;
}

}  // namespace

void apply_json_config(PipelineConfig& config, const json& j) {
  if (!j.is_object()) throw InvalidConfig("config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "A") {
        config.exponent_scale = value.get<double>();
      } else if (key == "B") {
        config.correlation_threshold = value.get<double>();
      } else if (key == "M") {
        config.embedding_dim = value.get<std::size_t>();
      } else if (key == "F_L") {
        config.min_group_size = value.get<int>();
      } else if (key == "F_U") {
        config.max_group_size = value.get<int>();
      } else if (key == "balance_bounds") {
        if (!value.is_object()) {
          throw InvalidConfig("balance_bounds must be an object");
        }
        config.balance_bounds.clear();
        for (const auto& [attr, bl] : value.items()) {
          config.balance_bounds.push_back({attr, bl.get<double>()});
        }
      } else if (key == "sense") {
        const auto s = value.get<std::string>();
        if (s == "max") {
          config.sense = Sense::kMaximize;
        } else if (s == "min") {
          config.sense = Sense::kMinimize;
        } else {
          throw InvalidConfig("sense must be 'max' or 'min', got '" + s + "'");
        }
      } else if (key == "correlation_kind") {
        const auto s = value.get<std::string>();
        if (s == "pearson") {
          config.correlation = CorrelationKind::kPearson;
        } else if (s == "spearman") {
          config.correlation = CorrelationKind::kSpearman;
        } else {
          throw InvalidConfig("correlation_kind must be 'pearson' or 'spearman'");
        }
      } else if (key == "seed") {
        config.seed = value.get<std::uint64_t>();
      } else if (key == "time_budget_s") {
        config.time_budget_s = value.get<double>();
      } else if (key == "workers") {
        config.workers = value.get<int>();
      } else if (key == "sample") {
        config.sample_size = value.get<std::size_t>();
      } else {
        throw InvalidConfig("unknown config key: " + key);
      }
    }
  } catch (const json::exception& e) {
    throw InvalidConfig(std::string("bad config value: ") + e.what());
  }
}

int cmd_embed(const fs::path& marks_path, const fs::path& out_dir,
              const PipelineConfig& config, std::ostream& diag) {
  try {
    fs::create_directories(out_dir);
    const MarkMatrix marks = load_marks(marks_path, config.delimiter);
    const WeightedGraph graph =
        build_similarity_graph(marks, graph_params(config), config.correlation);
    const SpectralEmbedding embedding = embed(graph, config.embedding_dim);
    if (embedding.zero_eigenvalue_count > 1) {
      diag << "warning: similarity graph is disconnected ("
           << embedding.zero_eigenvalue_count << " zero eigenvalues)\n";
    }
    write_embedding_files(marks, embedding, out_dir);
    if (config.dump_graph) write_graph_dump(graph, out_dir);
    return kExitOk;
  } catch (const Error& e) {
    diag << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

int cmd_partition(const fs::path& marks_path,
                  const std::optional<fs::path>& attrs_path,
                  const fs::path& out_dir, const PipelineConfig& config,
                  std::ostream& diag) {
  try {
    if (!config.min_group_size || !config.max_group_size) {
      throw InvalidConfig("partitioning requires --fl and --fu");
    }
    fs::create_directories(out_dir);
    const PreparedCohort prepared =
        prepare_cohort(marks_path, attrs_path, out_dir, config, diag);

    std::vector<BalanceConstraint> bounds;
    if (prepared.attrs) {
      bounds = effective_bounds(config.balance_bounds, *prepared.attrs, diag);
    } else if (!config.balance_bounds.empty()) {
      throw InvalidConfig("balance bounds given but no attributes file loaded");
    }

    PartitionProblem problem{distance_matrix(prepared.coordinates),
                             *config.min_group_size,
                             *config.max_group_size,
                             bounds,
                             prepared.attrs,
                             config.sense};
    const PartitionSolution solution = solve_exact(
        problem, SolverOptions{config.time_budget_s, config.workers});
    validate_solution(problem, solution);

    write_json(out_dir / "solution.json",
               solution_to_json(solution, prepared.marks, prepared.attrs,
                                config.sense));
    const GroupReport report = build_group_report(
        prepared.marks, prepared.attrs, solution, config.sense,
        config.correlation);
    ordered_json report_json{
        {"config", config_json(config, bounds, config.sense)},
        {"sample", sample_json(prepared, config)}};
    for (auto& [key, value] : report_to_json(report).items()) {
      report_json[key] = value;
    }
    write_json(out_dir / "report.json", report_json);

    auto csv = report_csv_header(report, false);
    for (auto& row : report_csv_rows(report)) csv.push_back(std::move(row));
    write_text_file(out_dir / "report.csv", csv);

    if (!solution.proven_optimal) {
      diag << "warning: time budget exceeded; best incumbent written\n";
      return kExitTimeout;
    }
    return kExitOk;
  } catch (const InfeasibleProblem& e) {
    diag << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const TimeoutBudgetExceeded& e) {
    diag << "timeout: " << e.what() << "\n";
    return kExitTimeout;
  } catch (const Error& e) {
    diag << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

int cmd_compare(const fs::path& marks_path,
                const std::optional<fs::path>& attrs_path,
                const fs::path& out_dir, const PipelineConfig& config,
                std::ostream& diag) {
  try {
    if (!config.min_group_size || !config.max_group_size) {
      throw InvalidConfig("comparison requires --fl and --fu");
    }
    fs::create_directories(out_dir);
    const PreparedCohort prepared =
        prepare_cohort(marks_path, attrs_path, out_dir, config, diag);

    std::vector<BalanceConstraint> balanced;
    if (prepared.attrs) {
      if (config.balance_bounds.empty()) {
        // Comparison default: require perfect balance on every attribute.
        for (const auto& name : prepared.attrs->attribute_names()) {
          balanced.push_back({name, 1.0});
        }
        diag << "note: no --balance given; comparing against B_L = 1 for "
                "every attribute\n";
      } else {
        balanced = config.balance_bounds;
      }
      balanced = effective_bounds(balanced, *prepared.attrs, diag);
    } else if (!config.balance_bounds.empty()) {
      throw InvalidConfig("balance bounds given but no attributes file loaded");
    }

    const std::vector<ScenarioOutcome> outcomes = {
        run_scenario("min_diversity", prepared, Sense::kMinimize, {}, config,
                     diag),
        run_scenario("max_diversity_unconstrained", prepared, Sense::kMaximize,
                     {}, config, diag),
        run_scenario("max_diversity_balanced", prepared, Sense::kMaximize,
                     balanced, config, diag)};

    ordered_json scenarios = ordered_json::array();
    std::vector<std::string> csv;
    bool have_header = false;
    int exit_code = kExitOk;
    for (const auto& outcome : outcomes) {
      ordered_json entry{{"name", outcome.name}};
      if (outcome.report) {
        entry["status"] =
            outcome.exit_code == kExitTimeout ? "timeout" : "optimal";
        if (!outcome.reason.empty()) entry["note"] = outcome.reason;
        for (auto& [key, value] : report_to_json(*outcome.report).items()) {
          entry[key] = value;
        }
        if (!have_header) {
          csv = report_csv_header(*outcome.report, true);
          have_header = true;
        }
        for (auto& row : report_csv_rows(*outcome.report, outcome.name)) {
          csv.push_back(std::move(row));
        }
        write_json(out_dir / ("solution_" + outcome.name + ".json"),
                   solution_to_json(*outcome.solution, prepared.marks,
                                    prepared.attrs, outcome.sense));
      } else {
        entry["status"] =
            outcome.exit_code == kExitInfeasible ? "infeasible" : "timeout";
        entry["note"] = outcome.reason;
        diag << "scenario " << outcome.name << ": " << outcome.reason << "\n";
      }
      scenarios.push_back(std::move(entry));
      exit_code = std::max(exit_code, outcome.exit_code);
    }

    ordered_json report_json{
        {"config", config_json(config, balanced, config.sense)},
        {"sample", sample_json(prepared, config)},
        {"quartile_convention", kQuartileConvention},
        {"scenarios", std::move(scenarios)}};
    write_json(out_dir / "report.json", report_json);
    if (csv.empty()) {
      csv = {std::string("# quartile_convention: ") + kQuartileConvention,
             "scenario,group_id,size,members,corr_min,corr_q1,corr_median,"
             "corr_q3,corr_max"};
    }
    write_text_file(out_dir / "report.csv", csv);
    return exit_code;
  } catch (const InfeasibleProblem& e) {
    diag << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const Error& e) {
    diag << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

int cmd_synth(const fs::path& spec_path, const fs::path& out_dir,
              const PipelineConfig& config, std::ostream& diag) {
  try {
    fs::create_directories(out_dir);
    std::ifstream in(spec_path);
    if (!in) throw MissingFile("cannot open spec file: " + spec_path.string());
    json spec;
    try {
      in >> spec;
    } catch (const json::exception& e) {
      throw InvalidConfig(std::string("malformed synth spec: ") + e.what());
    }
    if (!spec.is_object() || !spec.contains("L") ||
        !spec.contains("affinities") || !spec["affinities"].is_array()) {
      throw InvalidConfig(
          "synth spec must be an object with keys 'L' and 'affinities'");
    }
    std::size_t num_courses = 0;
    std::vector<AffinitySpec> affinities;
    std::uint64_t seed = 0;
    try {
      num_courses = spec["L"].get<std::size_t>();
      if (spec.contains("seed")) seed = spec["seed"].get<std::uint64_t>();
      for (const auto& a : spec["affinities"]) {
        AffinitySpec item;
        if (a.contains("label")) item.label = a["label"].get<std::string>();
        item.count = a.at("count").get<std::size_t>();
        item.profile = a.at("profile").get<std::vector<double>>();
        item.noise_std = a.value("noise_std", 0.0);
        affinities.push_back(std::move(item));
      }
    } catch (const json::exception& e) {
      throw InvalidConfig(std::string("malformed synth spec: ") + e.what());
    }
    if (config.seed) seed = *config.seed;  // CLI flag wins over the spec file

    const SynthCohort cohort = synth_cohort(affinities, num_courses, seed);
    write_marks(cohort.marks, out_dir / "marks_synth.csv", config.delimiter);
    std::vector<std::string> labels{"student_id,label"};
    for (std::size_t m = 0; m < cohort.labels.size(); ++m) {
      labels.push_back(cohort.marks.student_ids()[m] + "," + cohort.labels[m]);
    }
    write_text_file(out_dir / "labels.csv", labels);
    return kExitOk;
  } catch (const Error& e) {
    diag << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace groupforge
