#include "bkiexp/sensor_model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <utility>

#include "bkiexp/errors.hpp"

namespace bkiexp {
namespace {

TEST(SensorSpec, DefaultBeamCount) {
  const SensorSpec spec;
  EXPECT_EQ(spec.num_beams(), 61);
  const auto b = spec.bearings(0.3);
  ASSERT_EQ(b.size(), 61u);
  EXPECT_NEAR(b.front(), 0.3 - 1.5, 1e-12);
  EXPECT_NEAR(b.back(), 0.3 + 1.5, 1e-12);
  for (std::size_t i = 1; i < b.size(); ++i) EXPECT_NEAR(b[i] - b[i - 1], 0.05, 1e-12);
}

TEST(SensorSpec, CountForm) {
  const auto spec = SensorSpec::from_count(std::numbers::pi / 3, 20, 4.0);
  const auto b = spec.bearings(0.0);
  ASSERT_EQ(b.size(), 20u);
  EXPECT_NEAR(b.front(), -std::numbers::pi / 3, 1e-12);
  EXPECT_NEAR(b.back(), std::numbers::pi / 3, 1e-12);
}

TEST(SensorSpec, Validation) {
  SensorSpec both;
  both.beam_count = 10;
  EXPECT_THROW(both.validate(), std::invalid_argument);
  EXPECT_THROW(SensorSpec::from_step(1.0, 0.0, 6.0), std::invalid_argument);
  EXPECT_THROW(SensorSpec::from_count(1.0, 5, -1.0), std::invalid_argument);
}

TEST(SimulateScan, EmptyMapAllMisses) {
  const GroundTruthGrid truth(make_geometry(24.0, 14.0, 0.2));
  const auto scan = simulate_scan(truth, Action(12.0, 7.0, 0.0), SensorSpec{});
  ASSERT_EQ(scan.beams.size(), 61u);
  for (const auto& b : scan.beams) {
    EXPECT_FALSE(b.hit);
    EXPECT_EQ(b.range_m, 6.0);
  }
}

TEST(SimulateScan, WallTwoMetresAhead) {
  GroundTruthGrid truth(make_geometry(24.0, 14.0, 0.2));
  for (int r = 0; r < 70; ++r) truth.set_state({15, r}, CellState::Occupied);  // x in [3.0, 3.2)
  const auto scan = simulate_scan(truth, Action(1.1, 7.1, 0.0), SensorSpec{});
  const auto& centre = scan.beams[30];
  EXPECT_NEAR(centre.bearing_rad, 0.0, 1e-12);
  ASSERT_TRUE(centre.hit);
  EXPECT_GE(centre.range_m, 1.8);
  EXPECT_LE(centre.range_m, 2.0);
  for (const auto& b : scan.beams) {
    EXPECT_GT(b.range_m, 0.0);
    EXPECT_LE(b.range_m, 6.0);
    if (!b.hit) EXPECT_EQ(b.range_m, 6.0);
  }
}

TEST(SimulateScan, InvalidPoses) {
  GroundTruthGrid truth(make_geometry(4.0, 4.0, 0.2));
  truth.set_state({5, 5}, CellState::Occupied);
  EXPECT_THROW(simulate_scan(truth, Action(-1.0, 1.0, 0.0), SensorSpec{}), InvalidPoseError);
  EXPECT_THROW(simulate_scan(truth, Action(1.1, 1.1, 0.0), SensorSpec{}), InvalidPoseError);
}

TEST(IntegrateScan, SingleHitBeamChangesOnlyItsRay) {
  GroundTruthGrid truth(make_geometry(4.0, 4.0, 0.2));
  truth.set_state({10, 2}, CellState::Occupied);
  auto grid = new_grid(4.0, 4.0, 0.2);
  const auto spec = SensorSpec::from_count(0.1, 1, 3.0);
  const auto scan = simulate_scan(truth, Action(0.5, 0.5, 0.0), spec);
  ASSERT_TRUE(scan.beams[0].hit);
  integrate_scan(grid, scan, {});
  const auto& ray = scan.beams[0].ray;
  std::set<std::pair<int, int>> on_ray;
  for (const auto& c : ray.cells) on_ray.insert({c.col, c.row});
  for (int r = 0; r < 20; ++r) {
    for (int c = 0; c < 20; ++c) {
      const double l = grid.log_odds({c, r});
      if (!on_ray.count({c, r})) {
        EXPECT_EQ(l, 0.0);
      } else if (c == 10 && r == 2) {
        EXPECT_DOUBLE_EQ(l, 0.85);
      } else {
        EXPECT_DOUBLE_EQ(l, -0.4);
      }
    }
  }
}

TEST(IntegrateScan, TwiceDoublesIncrements) {
  GroundTruthGrid truth(make_geometry(6.0, 6.0, 0.2));
  for (int r = 0; r < 30; ++r) truth.set_state({20, r}, CellState::Occupied);
  const auto scan = simulate_scan(truth, Action(1.0, 3.0, 0.0), SensorSpec{});
  auto once = new_grid(6.0, 6.0, 0.2);
  integrate_scan(once, scan, {});
  auto twice = once;
  integrate_scan(twice, scan, {});
  for (int r = 0; r < 30; ++r) {
    for (int c = 0; c < 30; ++c) EXPECT_DOUBLE_EQ(twice.log_odds({c, r}), 2.0 * once.log_odds({c, r}));
  }
}

TEST(IntegrateScan, EmptyGridUnionOfRaysMovesFree) {
  const GroundTruthGrid truth(make_geometry(24.0, 14.0, 0.2));
  auto grid = new_grid(24.0, 14.0, 0.2);
  const auto scan = simulate_scan(truth, Action(12.1, 7.1, 0.7), SensorSpec{});
  integrate_scan(grid, scan, {});
  std::set<std::pair<int, int>> touched;
  for (const auto& b : scan.beams) {
    for (const auto& c : b.ray.cells) touched.insert({c.col, c.row});
  }
  for (int r = 0; r < 70; ++r) {
    for (int c = 0; c < 120; ++c) {
      const double l = grid.log_odds({c, r});
      if (touched.count({c, r})) {
        EXPECT_DOUBLE_EQ(l, -0.4) << c << "," << r;
      } else {
        EXPECT_EQ(l, 0.0);
      }
    }
  }
}

TEST(IntegrateScan, HitCellsRiseAndFreeCellsFall) {
  GroundTruthGrid truth(make_geometry(8.0, 8.0, 0.2));
  for (int i = 0; i < 40; ++i) {
    truth.set_state({i, 30}, CellState::Occupied);
    truth.set_state({30, i}, CellState::Occupied);
  }
  auto grid = new_grid(8.0, 8.0, 0.2);
  const auto scan = simulate_scan(truth, Action(2.0, 2.0, 0.8), SensorSpec{});
  const auto before = grid;
  integrate_scan(grid, scan, {});
  for (const auto& b : scan.beams) {
    for (std::size_t i = 0; i < b.ray.cells.size(); ++i) {
      const auto c = b.ray.cells[i];
      if (truth.occupied(c)) {
        EXPECT_GT(grid.probability(c), before.probability(c));
      } else {
        EXPECT_LT(grid.probability(c), before.probability(c));
      }
    }
  }
}

TEST(SimulateScan, Deterministic) {
  GroundTruthGrid truth(make_geometry(8.0, 8.0, 0.2));
  truth.set_state({25, 12}, CellState::Occupied);
  const auto a = simulate_scan(truth, Action(2.0, 2.0, 0.3), SensorSpec{});
  const auto b = simulate_scan(truth, Action(2.0, 2.0, 0.3), SensorSpec{});
  ASSERT_EQ(a.beams.size(), b.beams.size());
  for (std::size_t i = 0; i < a.beams.size(); ++i) {
    EXPECT_EQ(a.beams[i].ray, b.beams[i].ray);
    EXPECT_EQ(a.beams[i].range_m, b.beams[i].range_m);
  }
}

}  // namespace
}  // namespace bkiexp
