#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bkiexp/exploration.hpp"
#include "bkiexp/grid_map.hpp"

namespace bkiexp {

enum class MapKind { Structured, Unstructured, Cluttered, Pgm };

MapKind parse_map_kind(std::string_view name);
std::string_view map_kind_name(MapKind kind);

struct MapSource {
  MapKind kind = MapKind::Structured;
  std::filesystem::path pgm_path;
  double width_m = 24.0;
  double height_m = 14.0;
  double resolution_m = 0.2;
  std::uint64_t seed = 7;
};

GroundTruthGrid build_map(const MapSource& source);

/// Start pose used when an experiment does not specify one.
Action default_start(const MapSource& source, const GroundTruthGrid& truth);

struct ExperimentSpec {
  MapSource map;
  std::vector<Engine> engines{std::begin(kAllEngines), std::end(kAllEngines)};
  std::vector<int> n_values{30, 60};
  int trials = 20;
  std::uint64_t seed_base = 1;
  std::filesystem::path out_dir = "results";
  /// Template for every run; engine, n_train, n_query, epochs and seed are
  /// filled in per run.
  ExplorationConfig base{};
  std::optional<int> n_query;  // default 8 N
  std::optional<int> epochs;   // default N / 2 for BO engines
  std::optional<Action> start;

  void validate() const;
  ExplorationConfig run_config(Engine engine, int n, int trial) const;
};

/// Flat `key = value` text, one entry per line, '#' starts a comment.
ExperimentSpec parse_experiment_spec(std::string_view text);
ExperimentSpec load_experiment_spec(const std::filesystem::path& path);

/// Applies one configuration key to an ExplorationConfig. Returns false when
/// the key is not an exploration key.
bool apply_exploration_key(ExplorationConfig& cfg, std::string_view key, std::string_view value);

/// Column order of the per-step CSV files.
inline constexpr std::string_view kStepCsvHeader =
    "method,N,trial,seed,step,entropy_bits,coverage,explicit_eval_s,inference_s,total_s";
inline constexpr std::string_view kDecisionCsvHeader = "step,event,x_m,y_m,heading_rad,best_mi_bits";

struct StepRow {
  std::string method;
  int n = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  int step = 0;
  double entropy_bits = 0.0;
  double coverage = 0.0;
  double explicit_eval_s = 0.0;
  double inference_s = 0.0;
  double total_s = 0.0;
};

std::vector<StepRow> step_rows(const ExplorationLog& log);
std::string format_steps_csv(const ExplorationLog& log);
std::string format_decisions_csv(const ExplorationLog& log);
std::vector<StepRow> parse_steps_csv(std::string_view text);

std::string run_file_stem(std::string_view method, int n, int trial);

struct RunSummary {
  std::string method;
  int n = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  int steps = 0;
  double mean_total_s = 0.0;
  double std_total_s = 0.0;
  /// Sum of inference seconds over sum of total seconds, in percent.
  double inference_share_pct = 0.0;
  double final_entropy_bits = 0.0;
  double final_coverage = 0.0;
};

struct MethodSummary {
  std::string method;
  int n = 0;
  int runs = 0;
  int steps = 0;
  /// Mean and sample standard deviation of per-step total seconds, pooled over runs.
  double mean_total_s = 0.0;
  double std_total_s = 0.0;
  /// Mean over runs of each run's inference share.
  double mean_inference_share_pct = 0.0;
  double mean_final_entropy_bits = 0.0;
  double mean_final_coverage = 0.0;
};

RunSummary summarize_run(const std::vector<StepRow>& rows);
std::vector<MethodSummary> summarize_methods(const std::vector<std::vector<StepRow>>& runs);

std::string format_run_summaries_csv(const std::vector<RunSummary>& runs);
std::string format_method_summaries_csv(const std::vector<MethodSummary>& methods);

struct ExperimentResult {
  std::vector<ExplorationLog> logs;
  std::vector<RunSummary> runs;
  std::vector<MethodSummary> methods;
  std::vector<std::string> failures;
};

/// Worker count from BKIEXP_WORKERS (default 1).
int worker_count_from_env();

/// Runs every (engine, N, trial) combination, writing per-run step and
/// decision CSVs plus runs.csv and summary.csv under spec.out_dir. Failed runs
/// are recorded in `failures` and the experiment continues.
ExperimentResult run_experiment(const ExperimentSpec& spec, int workers = 1);

/// Recomputes method summaries from every *_steps.csv under `in_dir`.
std::vector<MethodSummary> summarize_directory(const std::filesystem::path& in_dir);

void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace bkiexp
