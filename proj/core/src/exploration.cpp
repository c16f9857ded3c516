#include "bkiexp/exploration.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include "bkiexp/errors.hpp"
#include "bkiexp/gp_baseline.hpp"
#include "bkiexp/mi_eval.hpp"

namespace bkiexp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::size_t argmax_lowest(std::span<const double> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

}  // namespace

std::string_view engine_tag(Engine e) {
  switch (e) {
    case Engine::NboGreedy: return "nbo";
    case Engine::BatchGp: return "batch_gp";
    case Engine::GpBo: return "gp_bo";
    case Engine::BatchBki: return "batch_bki";
    case Engine::BkiBo: return "bki_bo";
  }
  return "unknown";
}

Engine parse_engine(std::string_view tag) {
  for (Engine e : kAllEngines) {
    if (engine_tag(e) == tag) return e;
  }
  throw std::invalid_argument("unknown engine '" + std::string(tag) + "'");
}

bool engine_is_bo(Engine e) { return e == Engine::GpBo || e == Engine::BkiBo; }

bool engine_uses_gp(Engine e) { return e == Engine::BatchGp || e == Engine::GpBo; }

std::string_view step_event_tag(StepEvent e) { return e == StepEvent::Commit ? "commit" : "backtrack"; }

int ExplorationConfig::effective_epochs() const { return engine_is_bo(engine) ? epochs : 1; }

void ExplorationConfig::validate() const {
  if (n_train < 1) throw std::invalid_argument("config: n_train must be >= 1");
  if (n_query < 1) throw std::invalid_argument("config: n_query must be >= 1");
  if (epochs < 1) throw std::invalid_argument("config: epochs must be >= 1");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("config: alpha must lie in [0, 1]");
  if (!(info_threshold >= 0.0)) throw std::invalid_argument("config: info threshold must be >= 0");
  if (loop_limit < 0) throw std::invalid_argument("config: loop limit must be >= 0");
  if (scan_every_cells < 1) throw std::invalid_argument("config: scan_every_cells must be >= 1");
  if (!(gp_sigma2 > 0.0)) throw std::invalid_argument("config: gp_sigma2 must be positive");
  kernel.validate();
  bki.validate();
  sensor.validate();
}

// ---------------------------------------------------------------------------

std::vector<Action> sample_actions(const OccupancyGrid& grid, const Action& pose, int count, const SensorSpec& spec,
                                   Rng& rng, double occupied_above) {
  if (count < 1) throw std::invalid_argument("sample_actions: count must be >= 1");
  const auto& geo = grid.geometry();
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<Action> out;
  out.reserve(static_cast<std::size_t>(count));
  const long budget = 100L * count;

  auto attempt = [&](double half_width) {
    // Area-uniform radius on (0, max_range].
    const double r = spec.max_range_m * std::sqrt(1.0 - unit(rng));
    const double bearing = pose.heading_rad + (2.0 * unit(rng) - 1.0) * half_width;
    const Point2 p{pose.x_m + r * std::cos(bearing), pose.y_m + r * std::sin(bearing)};
    if (!geo.contains(p)) return;
    if (grid.probability(geo.world_to_cell(p)) > occupied_above) return;
    out.emplace_back(p.x, p.y, bearing);
  };

  for (long i = 0; i < budget && std::ssize(out) < count; ++i) attempt(spec.fov_rad);
  for (long i = 0; i < budget && std::ssize(out) < count; ++i) attempt(std::numbers::pi);

  if (out.empty()) throw ExplorationStuckError("sample_actions: no feasible candidate around pose");
  return out;
}

std::vector<Action> lattice_actions(const OccupancyGrid& grid, const Action& pose, const SensorSpec& spec,
                                    double occupied_above) {
  const auto& geo = grid.geometry();
  const CellIndex own = geo.world_to_cell({pose.x_m, pose.y_m});
  const double reach = spec.max_range_m / geo.resolution_m + 1.0;
  const int c0 = std::max(0, own.col - static_cast<int>(reach));
  const int c1 = std::min(geo.width_cells - 1, own.col + static_cast<int>(reach));
  const int r0 = std::max(0, own.row - static_cast<int>(reach));
  const int r1 = std::min(geo.height_cells - 1, own.row + static_cast<int>(reach));

  std::vector<Action> out;
  for (int r = r0; r <= r1; ++r) {
    for (int c = c0; c <= c1; ++c) {
      const CellIndex cell{c, r};
      if (cell == own) continue;
      const Point2 p = geo.cell_center(cell);
      const double dx = p.x - pose.x_m;
      const double dy = p.y - pose.y_m;
      if (std::hypot(dx, dy) > spec.max_range_m) continue;
      const double bearing = std::atan2(dy, dx);
      if (std::abs(wrap_angle(bearing - pose.heading_rad)) > spec.fov_rad) continue;
      if (grid.probability(cell) > occupied_above) continue;
      out.emplace_back(p.x, p.y, bearing);
    }
  }
  return out;
}

double objective(const MiPrediction& pred, double alpha, bool use_stddev) {
  const double uncertainty = use_stddev ? std::sqrt(pred.variance) : pred.variance;
  return alpha * pred.mean + (1.0 - alpha) * uncertainty;
}

OptimizationResult surrogate_optimize(TrainingSet& train, std::span<const Action> queries, int epochs, double alpha,
                                      bool use_stddev, const Surrogate& surrogate, const MiOracle& oracle) {
  if (queries.empty()) throw std::invalid_argument("optimize: query set is empty");
  OptimizationResult result;
  std::vector<double> scores(queries.size());
  for (int epoch = 0; epoch < epochs; ++epoch) {
    const auto preds = surrogate(train, queries);
    for (std::size_t i = 0; i < preds.size(); ++i) scores[i] = objective(preds[i], alpha, use_stddev);
    const Action& xs = queries[argmax_lowest(scores)];

    if (const auto known = train.find(xs)) {
      result.best_actions.push_back(xs);
      result.best_mi.push_back(train.values()[*known]);
    } else {
      const double mi = oracle(xs);
      ++result.explicit_evaluations;
      result.best_actions.push_back(xs);
      result.best_mi.push_back(mi);
      train.add(xs, mi);
    }
  }
  return result;
}

OptimizationResult bki_optimize(TrainingSet& train, std::span<const Action> queries, const ExplorationConfig& cfg,
                                const MiOracle& oracle) {
  const Surrogate bki = [&](const TrainingSet& t, std::span<const Action> q) {
    return bki_predict(t, q, cfg.kernel, cfg.bki);
  };
  return surrogate_optimize(train, queries, cfg.effective_epochs(), cfg.alpha, cfg.use_stddev, bki, oracle);
}

OptimizationResult gp_optimize(TrainingSet& train, std::span<const Action> queries, const ExplorationConfig& cfg,
                               const MiOracle& oracle) {
  const Surrogate gp = [&](const TrainingSet& t, std::span<const Action> q) {
    return gp_predict(gp_fit(t, cfg.kernel, cfg.gp_sigma2), q);
  };
  return surrogate_optimize(train, queries, cfg.effective_epochs(), cfg.alpha, cfg.use_stddev, gp, oracle);
}

// ---------------------------------------------------------------------------

namespace {

class Explorer {
 public:
  Explorer(const ExplorationConfig& cfg, const GroundTruthGrid& truth)
      : cfg_(cfg), truth_(truth), grid_(truth.geometry(), cfg.log_odds_clamp), rng_(cfg.rng_seed) {}

  ExplorationLog run(const Action& start) {
    const auto& geo = truth_.geometry();
    if (!geo.contains(Point2{start.x_m, start.y_m}) ||
        truth_.occupied(geo.world_to_cell({start.x_m, start.y_m}))) {
      throw InvalidPoseError("explore: start pose outside the grid or on an occupied cell");
    }

    ExplorationLog log;
    log.method = std::string(engine_tag(cfg_.engine));
    log.n_train = cfg_.n_train;
    log.seed = cfg_.rng_seed;

    pose_ = start;
    scan_at(pose_);
    log.initial_entropy_bits = map_entropy(grid_);
    log.initial_coverage = coverage(grid_, truth_, cfg_.coverage_threshold);
    stack_.push(pose_);

    for (int iter = 0; iter < cfg_.loop_limit && !stack_.empty(); ++iter) {
      log.steps.push_back(step(iter));
    }
    log.early_stop = stack_.empty();
    return log;
  }

  OccupancyGrid& grid() { return grid_; }

 private:
  StepRecord step(int iter) {
    const auto t_step = Clock::now();
    StepRecord rec;
    rec.step = iter;

    std::optional<Action> target;
    try {
      const auto candidates = sample_actions(grid_, pose_, cfg_.n_train, cfg_.sensor, rng_,
                                             cfg_.traversability.occupied_above);
      const auto t_explicit = Clock::now();
      TrainingSet train;
      for (const auto& a : candidates) train.add(a, evaluate(a));
      rec.explicit_eval_s = seconds_since(t_explicit);

      const auto queries = sample_actions(grid_, pose_, cfg_.n_query, cfg_.sensor, rng_,
                                          cfg_.traversability.occupied_above);
      const auto t_infer = Clock::now();
      const OptimizationResult best = optimize(train, queries);
      rec.inference_s = seconds_since(t_infer);
      rec.training_size = static_cast<int>(train.size());

      const std::size_t idx = argmax_lowest(best.best_mi);
      rec.best_mi_bits = best.best_mi[idx];
      if (best.best_mi[idx] > cfg_.info_threshold) target = best.best_actions[idx];
    } catch (const ExplorationStuckError&) {
      target.reset();
    }

    bool committed = false;
    if (target) {
      try {
        const auto path = astar(grid_, pose_, *target, cfg_.traversability);
        execute(path, *target);
        stack_.push(pose_);
        committed = true;
      } catch (const PlanningFailureError&) {
        committed = false;
      }
    }
    if (!committed) backtrack();

    rec.event = committed ? StepEvent::Commit : StepEvent::Backtrack;
    rec.pose = pose_;
    rec.entropy_bits = map_entropy(grid_);
    rec.coverage = coverage(grid_, truth_, cfg_.coverage_threshold);
    rec.total_s = seconds_since(t_step);
    return rec;
  }

  double evaluate(const Action& a) const { return action_mi(grid_, a, cfg_.sensor).mi_bits; }

  OptimizationResult optimize(TrainingSet& train, const std::vector<Action>& queries) {
    const MiOracle oracle = [this](const Action& a) { return evaluate(a); };
    switch (cfg_.engine) {
      case Engine::NboGreedy: {
        // Exhaustive greedy: every lattice action in the sensor sector is
        // evaluated explicitly, alongside the sampled training actions.
        OptimizationResult r;
        const auto values = train.values();
        std::size_t best_train = argmax_lowest(values);
        Action best_action = train.actions()[best_train];
        double best_value = values[best_train];
        const auto pool = lattice_actions(grid_, pose_, cfg_.sensor, cfg_.traversability.occupied_above);
        for (const auto& q : pool) {
          const double mi = oracle(q);
          ++r.explicit_evaluations;
          if (mi > best_value) {
            best_value = mi;
            best_action = q;
          }
        }
        r.best_actions.push_back(best_action);
        r.best_mi.push_back(best_value);
        return r;
      }
      case Engine::BatchBki:
      case Engine::BkiBo: return bki_optimize(train, queries, cfg_, oracle);
      case Engine::BatchGp:
      case Engine::GpBo: return gp_optimize(train, queries, cfg_, oracle);
    }
    throw std::logic_error("unhandled engine");
  }

  void backtrack() {
    stack_.pop();
    while (!stack_.empty()) {
      try {
        const auto path = astar(grid_, pose_, stack_.top(), cfg_.traversability);
        execute(path, stack_.top());
        return;
      } catch (const PlanningFailureError&) {
        stack_.pop();
      }
    }
  }

  void scan_at(const Action& pose) {
    integrate_scan(grid_, simulate_scan(truth_, pose, cfg_.sensor), cfg_.sensor_model);
  }

  /// Moves cell by cell along the path, scanning as it goes. Stops early when
  /// the next cell is believed occupied or physically blocked.
  void execute(const GridPath& path, const Action& goal) {
    const auto& geo = grid_.geometry();
    if (path.cells.size() <= 1) {
      pose_ = goal;
      scan_at(pose_);
      return;
    }
    int since_scan = 0;
    for (std::size_t i = 1; i < path.cells.size(); ++i) {
      const CellIndex next = path.cells[i];
      if (truth_.occupied(next) || grid_.probability(next) > cfg_.traversability.occupied_above) break;
      const bool last = i + 1 == path.cells.size();
      if (last) {
        pose_ = goal;
      } else {
        const Point2 c = geo.cell_center(next);
        pose_ = Action(c.x, c.y, std::atan2(c.y - pose_.y_m, c.x - pose_.x_m));
      }
      if (++since_scan >= cfg_.scan_every_cells || last) {
        scan_at(pose_);
        since_scan = 0;
      }
    }
  }

  const ExplorationConfig& cfg_;
  const GroundTruthGrid& truth_;
  OccupancyGrid grid_;
  Rng rng_;
  Action pose_{};
  ActionStack stack_;
};

}  // namespace

ExplorationLog explore(const ExplorationConfig& cfg, const GroundTruthGrid& truth, const Action& start) {
  return explore(cfg, truth, start, nullptr);
}

ExplorationLog explore(const ExplorationConfig& cfg, const GroundTruthGrid& truth, const Action& start,
                       OccupancyGrid* final_grid) {
  cfg.validate();
  Explorer explorer(cfg, truth);
  ExplorationLog log = explorer.run(start);
  if (final_grid) *final_grid = explorer.grid();
  return log;
}

}  // namespace bkiexp
