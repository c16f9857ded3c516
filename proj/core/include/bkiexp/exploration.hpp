#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bkiexp/action.hpp"
#include "bkiexp/astar.hpp"
#include "bkiexp/bki.hpp"
#include "bkiexp/grid_map.hpp"
#include "bkiexp/kernel.hpp"
#include "bkiexp/sensor_model.hpp"

namespace bkiexp {

enum class Engine { NboGreedy, BatchGp, GpBo, BatchBki, BkiBo };

inline constexpr Engine kAllEngines[] = {Engine::NboGreedy, Engine::BatchGp, Engine::BatchBki, Engine::GpBo,
                                         Engine::BkiBo};

/// Short tag used in CSV output and on the command line ("nbo", "batch_gp", ...).
std::string_view engine_tag(Engine e);
Engine parse_engine(std::string_view tag);
bool engine_is_bo(Engine e);
bool engine_uses_gp(Engine e);

using Rng = std::mt19937_64;

struct ExplorationConfig {
  int n_train = 30;
  int n_query = 240;
  int epochs = 15;  // used by the BO engines; batch engines always run one epoch
  double alpha = 0.5;
  double info_threshold = 0.05;
  int loop_limit = 50;
  Engine engine = Engine::BkiBo;

  KernelSpec kernel{};
  BkiHyperparams bki{};
  double gp_sigma2 = 1e-4;
  /// Use sqrt(variance) as the uncertainty term of the objective.
  bool use_stddev = false;

  SensorSpec sensor{};
  InverseSensorModel sensor_model{};
  double log_odds_clamp = kDefaultLogOddsClamp;
  TraversabilityConfig traversability{};
  double coverage_threshold = 0.25;
  /// Take a scan every this many traversed path cells (the goal cell is always scanned).
  int scan_every_cells = 1;

  std::uint64_t rng_seed = 0;

  /// Epoch count actually run by the configured engine.
  int effective_epochs() const;
  void validate() const;
};

/// History of committed poses; the top is the most recent one.
class ActionStack {
 public:
  void push(const Action& a) { history_.push_back(a); }
  void pop() { history_.pop_back(); }
  const Action& top() const { return history_.back(); }
  bool empty() const { return history_.empty(); }
  std::size_t size() const { return history_.size(); }
  std::span<const Action> history() const { return history_; }

 private:
  std::vector<Action> history_;
};

/// Uniform samples over the sensor's annular sector around `pose` (area-uniform
/// radius in (0, max_range], bearing within the FOV). Cells believed occupied
/// (p > occupied_above) and out-of-grid positions are rejected. After 100*count
/// attempts the sector widens to the full disc for another 100*count attempts.
/// Each sample faces away from `pose`. Throws ExplorationStuckError when no
/// sample is feasible.
std::vector<Action> sample_actions(const OccupancyGrid& grid, const Action& pose, int count, const SensorSpec& spec,
                                   Rng& rng, double occupied_above = 0.65);

/// Grid-discretized action set: every cell centre within the sensor's
/// range and FOV around `pose` (excluding the pose's own cell) that is not
/// believed occupied, facing away from `pose`, in row-major order.
std::vector<Action> lattice_actions(const OccupancyGrid& grid, const Action& pose, const SensorSpec& spec,
                                    double occupied_above = 0.65);

/// alpha * mean + (1 - alpha) * uncertainty, where the uncertainty is the
/// posterior variance (or its square root when use_stddev is set).
double objective(const MiPrediction& pred, double alpha, bool use_stddev = false);

using MiOracle = std::function<double(const Action&)>;
using Surrogate = std::function<std::vector<MiPrediction>(const TrainingSet&, std::span<const Action>)>;

struct OptimizationResult {
  std::vector<Action> best_actions;
  std::vector<double> best_mi;
  int explicit_evaluations = 0;
};

/// Epoch loop shared by the BKI and GP engines. Each epoch predicts over the
/// queries, picks the objective argmax (lowest index on ties) and either reuses
/// its known value or evaluates it with `oracle` and adds it to `train`.
OptimizationResult surrogate_optimize(TrainingSet& train, std::span<const Action> queries, int epochs, double alpha,
                                      bool use_stddev, const Surrogate& surrogate, const MiOracle& oracle);

OptimizationResult bki_optimize(TrainingSet& train, std::span<const Action> queries, const ExplorationConfig& cfg,
                                const MiOracle& oracle);

OptimizationResult gp_optimize(TrainingSet& train, std::span<const Action> queries, const ExplorationConfig& cfg,
                               const MiOracle& oracle);

enum class StepEvent { Commit, Backtrack };

std::string_view step_event_tag(StepEvent e);

struct StepRecord {
  int step = 0;
  double entropy_bits = 0.0;
  double coverage = 0.0;
  double explicit_eval_s = 0.0;
  double inference_s = 0.0;
  double total_s = 0.0;
  StepEvent event = StepEvent::Commit;
  /// Pose of the robot after executing the step.
  Action pose{};
  /// Largest explicitly evaluated MI among the engine's best list (0 if none).
  double best_mi_bits = 0.0;
  int training_size = 0;
};

struct ExplorationLog {
  std::string method;
  int n_train = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  double initial_entropy_bits = 0.0;
  double initial_coverage = 0.0;
  bool early_stop = false;
  std::vector<StepRecord> steps;
};

/// Runs the exploration loop against a ground-truth map from `start` until the
/// loop limit or until the action stack empties (logged as early stop).
ExplorationLog explore(const ExplorationConfig& cfg, const GroundTruthGrid& truth, const Action& start);

/// Same as above but also hands back the final belief grid.
ExplorationLog explore(const ExplorationConfig& cfg, const GroundTruthGrid& truth, const Action& start,
                       OccupancyGrid* final_grid);

}  // namespace bkiexp
