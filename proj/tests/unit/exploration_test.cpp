#include "bkiexp/exploration.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bkiexp/errors.hpp"
#include "bkiexp/maps.hpp"

namespace bkiexp {
namespace {

TEST(Engines, TagsRoundTrip) {
  for (Engine e : kAllEngines) EXPECT_EQ(parse_engine(engine_tag(e)), e);
  EXPECT_THROW(parse_engine("bogus"), std::invalid_argument);
  EXPECT_TRUE(engine_is_bo(Engine::BkiBo));
  EXPECT_FALSE(engine_is_bo(Engine::BatchGp));
  EXPECT_TRUE(engine_uses_gp(Engine::GpBo));
}

TEST(Config, EffectiveEpochs) {
  ExplorationConfig cfg;
  cfg.epochs = 15;
  cfg.engine = Engine::BatchBki;
  EXPECT_EQ(cfg.effective_epochs(), 1);
  cfg.engine = Engine::BkiBo;
  EXPECT_EQ(cfg.effective_epochs(), 15);
  cfg.alpha = 1.5;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(SampleActions, CountRangeAndHeading) {
  const auto g = new_grid(24.0, 14.0, 0.2);
  const Action pose(12.0, 7.0, 0.4);
  Rng rng(1);
  const SensorSpec spec;
  const auto s = sample_actions(g, pose, 30, spec, rng);
  ASSERT_EQ(s.size(), 30u);
  for (const auto& a : s) {
    const double dx = a.x_m - pose.x_m;
    const double dy = a.y_m - pose.y_m;
    EXPECT_LE(std::hypot(dx, dy), spec.max_range_m + 1e-12);
    EXPECT_LE(std::abs(wrap_angle(std::atan2(dy, dx) - pose.heading_rad)), spec.fov_rad + 1e-9);
    EXPECT_NEAR(std::abs(wrap_angle(a.heading_rad - std::atan2(dy, dx))), 0.0, 1e-9);
  }
}

TEST(SampleActions, DeterministicUnderSeed) {
  const auto g = new_grid(24.0, 14.0, 0.2);
  Rng a(42);
  Rng b(42);
  EXPECT_EQ(sample_actions(g, Action(3.0, 3.0, 0.0), 60, {}, a), sample_actions(g, Action(3.0, 3.0, 0.0), 60, {}, b));
}

TEST(SampleActions, RejectsBelievedOccupied) {
  auto g = new_grid(10.0, 10.0, 0.2);
  for (int r = 0; r < 50; ++r) {
    for (int c = 30; c < 50; ++c) g.set_log_odds({c, r}, 3.0);
  }
  Rng rng(3);
  for (const auto& a : sample_actions(g, Action(5.0, 5.0, 0.0), 200, {}, rng)) {
    EXPECT_LE(g.probability(g.geometry().world_to_cell({a.x_m, a.y_m})), 0.65);
  }
}

TEST(SampleActions, StuckWhenSurroundedByOccupied) {
  auto g = new_grid(4.0, 4.0, 0.2);
  for (int r = 0; r < 20; ++r) {
    for (int c = 0; c < 20; ++c) g.set_log_odds({c, r}, 2.0);
  }
  Rng rng(0);
  EXPECT_THROW(sample_actions(g, Action(2.0, 2.0, 0.0), 10, {}, rng), ExplorationStuckError);
}

TEST(Objective, Arithmetic) {
  const MiPrediction p{0.4, 0.2, 0.0};
  EXPECT_DOUBLE_EQ(objective(p, 0.5), 0.3);
  EXPECT_DOUBLE_EQ(objective(p, 1.0), 0.4);
  EXPECT_DOUBLE_EQ(objective(p, 0.0), 0.2);
  EXPECT_DOUBLE_EQ(objective({0.4, 0.25, 0.0}, 0.0, true), 0.5);
}

struct CountingOracle {
  int calls = 0;
  double operator()(const Action& a) {
    ++calls;
    return 1.0 + std::sin(a.x_m) * std::cos(a.y_m);
  }
};

std::vector<Action> grid_queries(int n) {
  std::vector<Action> q;
  for (int i = 0; i < n; ++i) q.emplace_back(0.37 * i, 0.11 * (i % 7), 0.0);
  return q;
}

TEST(BkiOptimize, BatchRunsOneEpoch) {
  ExplorationConfig cfg;
  cfg.engine = Engine::BatchBki;
  TrainingSet train;
  train.add(Action(0.0, 0.0, 0.0), 0.5);
  CountingOracle o;
  const auto r = bki_optimize(train, grid_queries(40), cfg, std::ref(o));
  EXPECT_EQ(r.best_actions.size(), 1u);
  EXPECT_EQ(r.best_mi.size(), 1u);
  EXPECT_LE(o.calls, 1);
}

TEST(BkiOptimize, EpochsGrowTrainingByAtMostEpochs) {
  ExplorationConfig cfg;
  cfg.engine = Engine::BkiBo;
  cfg.epochs = 15;
  TrainingSet train;
  for (int i = 0; i < 30; ++i) train.add(Action(0.2 * i, 1.0, 0.0), 0.1 * (i % 5));
  CountingOracle o;
  const auto r = bki_optimize(train, grid_queries(240), cfg, std::ref(o));
  EXPECT_EQ(r.best_actions.size(), 15u);
  EXPECT_EQ(r.best_mi.size(), 15u);
  EXPECT_GE(train.size(), 30u);
  EXPECT_LE(train.size(), 45u);
  EXPECT_EQ(static_cast<int>(train.size()) - 30, o.calls);
  EXPECT_EQ(r.explicit_evaluations, o.calls);
}

TEST(BkiOptimize, QueriesInTrainingNeedNoEvaluation) {
  ExplorationConfig cfg;
  cfg.engine = Engine::BkiBo;
  cfg.epochs = 10;
  TrainingSet train;
  const auto q = grid_queries(20);
  for (std::size_t i = 0; i < q.size(); ++i) train.add(q[i], 0.05 * static_cast<double>(i));
  CountingOracle o;
  const auto r = bki_optimize(train, q, cfg, std::ref(o));
  EXPECT_EQ(o.calls, 0);
  EXPECT_EQ(train.size(), 20u);
  EXPECT_EQ(r.best_mi.size(), 10u);
}

TEST(BkiOptimize, ArgmaxMatchesGreedyOnCoincidentQueries) {
  ExplorationConfig cfg;
  cfg.engine = Engine::BatchBki;
  cfg.alpha = 1.0;
  TrainingSet train;
  std::vector<Action> q;
  const std::vector<double> values{0.3, 2.1, 0.7, 2.0, 1.4};
  for (std::size_t i = 0; i < values.size(); ++i) {
    q.emplace_back(100.0 * static_cast<double>(i), 0.0, 0.0);
    train.add(q.back(), values[i]);
  }
  CountingOracle o;
  const auto r = bki_optimize(train, q, cfg, std::ref(o));
  const auto greedy = std::max_element(values.begin(), values.end()) - values.begin();
  EXPECT_EQ(r.best_actions[0], q[static_cast<std::size_t>(greedy)]);
  EXPECT_EQ(r.best_mi[0], 2.1);
}

TEST(GpOptimize, BestListLength) {
  ExplorationConfig cfg;
  cfg.engine = Engine::GpBo;
  cfg.epochs = 5;
  TrainingSet train;
  for (int i = 0; i < 10; ++i) train.add(Action(0.3 * i, 0.0, 0.0), 0.2 * i);
  CountingOracle o;
  const auto r = gp_optimize(train, grid_queries(50), cfg, std::ref(o));
  EXPECT_EQ(r.best_mi.size(), 5u);
  EXPECT_EQ(train.size(), 10u + static_cast<std::size_t>(o.calls));
}

TEST(Optimize, EmptyQueries) {
  ExplorationConfig cfg;
  TrainingSet train;
  train.add(Action(0.0, 0.0, 0.0), 1.0);
  CountingOracle o;
  EXPECT_THROW(bki_optimize(train, {}, cfg, std::ref(o)), std::invalid_argument);
}

TEST(LatticeActions, InsideSector) {
  const auto g = new_grid(24.0, 14.0, 0.2);
  const Action pose(12.1, 7.1, 0.0);
  const SensorSpec spec;
  const auto pool = lattice_actions(g, pose, spec);
  EXPECT_GT(pool.size(), 1000u);
  for (const auto& a : pool) {
    const double dx = a.x_m - pose.x_m;
    const double dy = a.y_m - pose.y_m;
    EXPECT_LE(std::hypot(dx, dy), 6.0);
    EXPECT_LE(std::abs(std::atan2(dy, dx)), 1.5 + 1e-12);
  }
}

TEST(ActionStackTest, PushPop) {
  ActionStack s;
  s.push(Action(1.0, 1.0, 0.0));
  s.push(Action(2.0, 1.0, 0.0));
  EXPECT_EQ(s.top().x_m, 2.0);
  s.pop();
  EXPECT_EQ(s.top().x_m, 1.0);
  EXPECT_EQ(s.size(), 1u);
}

GroundTruthGrid walled_room(double w, double h) {
  GroundTruthGrid t(make_geometry(w, h, 0.2));
  for (int c = 0; c < t.width_cells(); ++c) {
    t.set_state({c, 0}, CellState::Occupied);
    t.set_state({c, t.height_cells() - 1}, CellState::Occupied);
  }
  for (int r = 0; r < t.height_cells(); ++r) {
    t.set_state({0, r}, CellState::Occupied);
    t.set_state({t.width_cells() - 1, r}, CellState::Occupied);
  }
  return t;
}

TEST(Explore, FullyKnownAfterFirstScanTerminates) {
  const auto truth = walled_room(2.0, 2.0);
  ExplorationConfig cfg;
  cfg.log_odds_clamp = 0.4;  // a single observation saturates a cell
  cfg.sensor = SensorSpec::from_count(std::numbers::pi, 720, 6.0);
  cfg.n_train = 10;
  cfg.n_query = 20;
  cfg.engine = Engine::BatchBki;
  OccupancyGrid final_grid(truth.geometry());
  const auto log = explore(cfg, truth, Action(1.0, 1.0, 0.0), &final_grid);
  EXPECT_EQ(map_entropy(final_grid), 0.0);
  ASSERT_EQ(log.steps.size(), 1u);
  EXPECT_EQ(log.steps[0].event, StepEvent::Backtrack);
  EXPECT_LE(log.steps[0].best_mi_bits, cfg.info_threshold);
  EXPECT_TRUE(log.early_stop);
}

TEST(Explore, InvalidStart) {
  const auto truth = walled_room(4.0, 4.0);
  EXPECT_THROW(explore(ExplorationConfig{}, truth, Action(0.1, 0.1, 0.0)), InvalidPoseError);
}

class ExploreEngines : public ::testing::TestWithParam<Engine> {};

TEST_P(ExploreEngines, InvariantsOnStructuredMap) {
  const auto truth = generate_structured_map(24.0, 14.0, 0.2, 5);
  ExplorationConfig cfg;
  cfg.engine = GetParam();
  cfg.n_train = 20;
  cfg.n_query = 160;
  cfg.epochs = 10;
  cfg.loop_limit = 12;
  cfg.rng_seed = 77;
  const auto log = explore(cfg, truth, Action(1.2, 1.2, 0.0));
  ASSERT_FALSE(log.steps.empty());
  double prev_h = log.initial_entropy_bits;
  double prev_c = log.initial_coverage;
  for (std::size_t i = 0; i < log.steps.size(); ++i) {
    const auto& s = log.steps[i];
    EXPECT_EQ(s.step, static_cast<int>(i));
    EXPECT_LE(s.entropy_bits, prev_h + 1e-9);
    EXPECT_GE(s.coverage, prev_c - 1e-12);
    EXPECT_GE(s.explicit_eval_s, 0.0);
    EXPECT_GE(s.inference_s, 0.0);
    EXPECT_GE(s.total_s, s.explicit_eval_s + s.inference_s);
    if (s.event == StepEvent::Commit) EXPECT_GT(s.best_mi_bits, cfg.info_threshold);
    prev_h = s.entropy_bits;
    prev_c = s.coverage;
  }
  EXPECT_LT(log.steps.back().entropy_bits, log.initial_entropy_bits);

  const auto again = explore(cfg, truth, Action(1.2, 1.2, 0.0));
  ASSERT_EQ(again.steps.size(), log.steps.size());
  for (std::size_t i = 0; i < log.steps.size(); ++i) {
    EXPECT_EQ(again.steps[i].pose, log.steps[i].pose);
    EXPECT_EQ(again.steps[i].entropy_bits, log.steps[i].entropy_bits);
    EXPECT_EQ(again.steps[i].best_mi_bits, log.steps[i].best_mi_bits);
  }
}

INSTANTIATE_TEST_SUITE_P(AllEngines, ExploreEngines, ::testing::ValuesIn(kAllEngines),
                         [](const auto& info) { return std::string(engine_tag(info.param)); });

}  // namespace
}  // namespace bkiexp
