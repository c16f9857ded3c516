#include "bkiexp/grid_map.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "oracles.hpp"

namespace bkiexp {
namespace {

TEST(NewGrid, DefaultMapSize) {
  const auto g = new_grid(24.0, 14.0, 0.2);
  EXPECT_EQ(g.width_cells(), 120);
  EXPECT_EQ(g.height_cells(), 70);
  for (double l : g.log_odds_data()) EXPECT_EQ(l, 0.0);
  EXPECT_DOUBLE_EQ(g.probability({119, 69}), 0.5);
}

TEST(NewGrid, SingleCell) {
  const auto g = new_grid(1.0, 1.0, 1.0);
  EXPECT_EQ(g.width_cells(), 1);
  EXPECT_EQ(g.height_cells(), 1);
  EXPECT_DOUBLE_EQ(g.probability({0, 0}), 0.5);
}

TEST(NewGrid, RoundsUp) {
  const auto g = new_grid(1.1, 1.0, 0.5);
  EXPECT_EQ(g.width_cells(), 3);
  EXPECT_EQ(g.height_cells(), 2);
}

TEST(NewGrid, RejectsNonPositive) {
  EXPECT_THROW(new_grid(0.0, 1.0, 0.2), std::invalid_argument);
  EXPECT_THROW(new_grid(1.0, -1.0, 0.2), std::invalid_argument);
  EXPECT_THROW(new_grid(1.0, 1.0, 0.0), std::invalid_argument);
}

TEST(UpdateCell, AddsAndClamps) {
  auto g = new_grid(2.0, 2.0, 1.0);
  const InverseSensorModel m;
  g.update_cell({0, 0}, true, m);
  EXPECT_DOUBLE_EQ(g.log_odds({0, 0}), 0.85);
  g.update_cell({0, 0}, true, m);
  EXPECT_DOUBLE_EQ(g.log_odds({0, 0}), 1.7);

  g.set_log_odds({1, 0}, kDefaultLogOddsClamp);
  g.update_cell({1, 0}, true, m);
  EXPECT_EQ(g.log_odds({1, 0}), kDefaultLogOddsClamp);

  g.update_cell({0, 1}, false, m);
  EXPECT_DOUBLE_EQ(g.log_odds({0, 1}), -0.4);
  EXPECT_NEAR(g.probability({0, 1}), 0.4013123398875479996309, 1e-15);
}

TEST(UpdateCell, OutOfBounds) {
  auto g = new_grid(2.0, 2.0, 1.0);
  EXPECT_THROW(g.update_cell({2, 0}, true, {}), std::out_of_range);
  EXPECT_THROW(g.update_cell({0, -1}, false, {}), std::out_of_range);
  EXPECT_THROW((void)cell_entropy(g, {5, 5}), std::out_of_range);
}

TEST(UpdateCell, OppositeObservationRestoresPrior) {
  auto g = new_grid(3.0, 1.0, 1.0);
  const InverseSensorModel symmetric{0.7, -0.7};
  g.set_log_odds({1, 0}, 1.3);
  g.update_cell({1, 0}, true, symmetric);
  g.update_cell({1, 0}, false, symmetric);
  EXPECT_NEAR(g.log_odds({1, 0}), 1.3, 1e-15);
}

TEST(UpdateCell, RandomSequencesStayInsideClamps) {
  auto g = new_grid(4.0, 4.0, 1.0);
  std::mt19937_64 rng(11);
  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<int> cell(0, 3);
  for (int i = 0; i < 5000; ++i) {
    g.update_cell({cell(rng), cell(rng)}, coin(rng), {});
  }
  for (double l : g.log_odds_data()) {
    EXPECT_LE(std::abs(l), kDefaultLogOddsClamp);
    const double p = log_odds_to_probability(l);
    EXPECT_GT(p, 0.0);
    EXPECT_LT(p, 1.0);
  }
}

TEST(Entropy, CellValues) {
  auto g = new_grid(3.0, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(cell_entropy(g, {0, 0}), 1.0);
  g.set_log_odds({1, 0}, probability_to_log_odds(0.3));
  EXPECT_NEAR(cell_entropy(g, {1, 0}), 0.8812908992306926182248, 1e-12);
  g.set_log_odds({2, 0}, kDefaultLogOddsClamp);
  EXPECT_EQ(cell_entropy(g, {2, 0}), 0.0);
  EXPECT_EQ(binary_entropy_bits(1.0), 0.0);
  EXPECT_EQ(binary_entropy_bits(0.0), 0.0);
}

TEST(Entropy, MapSums) {
  EXPECT_DOUBLE_EQ(map_entropy(new_grid(24.0, 14.0, 0.2)), 8400.0);

  auto sat = new_grid(3.0, 2.0, 1.0);
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 3; ++c) sat.set_log_odds({c, r}, (c + r) % 2 ? 6.0 : -6.0);
  }
  EXPECT_EQ(map_entropy(sat), 0.0);

  auto mixed = new_grid(5.0, 4.0, 1.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  long double expected = 0.0L;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 5; ++c) {
      const double l = u(rng);
      mixed.set_log_odds({c, r}, l);
      expected += oracle::entropy_bits(1.0L / (1.0L + std::exp(-static_cast<long double>(l))));
    }
  }
  EXPECT_NEAR(map_entropy(mixed), static_cast<double>(expected), 1e-12);
}

TEST(Coverage, Counting) {
  auto g = new_grid(4.0, 2.0, 1.0);
  const GroundTruthGrid truth(g.geometry());
  EXPECT_EQ(coverage(g, truth), 0.0);
  for (int c = 0; c < 4; ++c) g.set_log_odds({c, 0}, probability_to_log_odds(0.9));
  EXPECT_DOUBLE_EQ(coverage(g, truth, 0.25), 0.5);
  for (int c = 0; c < 4; ++c) g.set_log_odds({c, 1}, -6.0);
  EXPECT_DOUBLE_EQ(coverage(g, truth, 0.25), 1.0);
}

TEST(Coverage, Errors) {
  const auto g = new_grid(4.0, 2.0, 1.0);
  EXPECT_THROW(coverage(g, GroundTruthGrid(make_geometry(2.0, 2.0, 1.0))), std::invalid_argument);
  const GroundTruthGrid truth(g.geometry());
  EXPECT_THROW(coverage(g, truth, 0.0), std::invalid_argument);
  EXPECT_THROW(coverage(g, truth, 0.5), std::invalid_argument);
}

TEST(Raycast, AxisAligned) {
  const GroundTruthGrid truth(make_geometry(10.0, 10.0, 1.0));
  const auto ray = raycast(truth, Action(2.5, 4.5, 0.0), 0.0, 3.0);
  const std::vector<CellIndex> expected{{2, 4}, {3, 4}, {4, 4}, {5, 4}};
  EXPECT_EQ(ray.cells, expected);
  EXPECT_FALSE(ray.hit);
  EXPECT_FALSE(ray.hit_index.has_value());
  EXPECT_LE(ray.range_m, 3.0);
}

TEST(Raycast, StopsAtWall) {
  GroundTruthGrid truth(make_geometry(10.0, 10.0, 0.2));
  for (int r = 0; r < 50; ++r) truth.set_state({7, r}, CellState::Occupied);
  // Origin on the left edge of cell 5, wall two cells ahead.
  const auto ray = raycast(truth, Action(1.0, 1.1, 0.0), 0.0, 5.0);
  ASSERT_TRUE(ray.hit);
  ASSERT_EQ(ray.hit_index, 2u);
  EXPECT_EQ(ray.cells.size(), 3u);
  EXPECT_EQ(ray.cells.back(), (CellIndex{7, 5}));
  EXPECT_NEAR(ray.range_m, 0.4, 1e-12);
}

TEST(Raycast, StopsAtBoundary) {
  const GroundTruthGrid truth(make_geometry(4.0, 4.0, 1.0));
  const auto ray = raycast(truth, Action(1.5, 1.5, 0.0), std::numbers::pi, 10.0);
  EXPECT_EQ(ray.cells.size(), 2u);
  EXPECT_FALSE(ray.hit);
  EXPECT_LE(ray.range_m, 1.5);
}

TEST(Raycast, OriginOutside) {
  const GroundTruthGrid truth(make_geometry(4.0, 4.0, 1.0));
  EXPECT_THROW(raycast(truth, Action(-0.5, 1.0, 0.0), 0.0, 2.0), std::invalid_argument);
  EXPECT_THROW(raycast(truth, Action(1.0, 1.0, 0.0), 0.0, 0.0), std::invalid_argument);
}

TEST(Raycast, DiagonalMatchesReferenceTraversal) {
  const double res = 0.2;
  const GroundTruthGrid truth(make_geometry(6.0, 6.0, res));
  const auto ray = raycast(truth, Action(1.1, 1.1, 0.0), std::numbers::pi / 4, 3.0);
  const auto ref = oracle::fine_ray(30, 30, res, 1.1, 1.1, std::numbers::pi / 4, 3.0,
                                    [](oracle::Cell) { return false; }, 0.1);
  ASSERT_EQ(ray.cells.size(), ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) {
    EXPECT_EQ(ray.cells[i].col, ref[i].col);
    EXPECT_EQ(ray.cells[i].row, ref[i].row);
  }
  for (std::size_t i = 1; i < ray.cells.size(); ++i) {
    EXPECT_EQ(ray.cells[i].col - ray.cells[i - 1].col, ray.cells[i].row - ray.cells[i - 1].row);
  }
}

TEST(Raycast, RandomRaysMatchReferenceAndAreEightConnected) {
  const double res = 0.2;
  GroundTruthGrid truth(make_geometry(8.0, 6.0, res));
  std::mt19937_64 rng(5);
  std::bernoulli_distribution wall(0.08);
  for (int r = 0; r < truth.height_cells(); ++r) {
    for (int c = 0; c < truth.width_cells(); ++c) {
      if (wall(rng)) truth.set_state({c, r}, CellState::Occupied);
    }
  }
  std::uniform_real_distribution<double> ux(0.01, 7.99);
  std::uniform_real_distribution<double> uy(0.01, 5.99);
  std::uniform_real_distribution<double> ub(-std::numbers::pi, std::numbers::pi);
  for (int i = 0; i < 300; ++i) {
    const double x = ux(rng);
    const double y = uy(rng);
    const double b = ub(rng);
    const auto ray = raycast(truth, Action(x, y, 0.0), b, 4.0);
    const auto ref = oracle::fine_ray(
        40, 30, res, x, y, b, 4.0,
        [&](oracle::Cell c) { return truth.occupied({c.col, c.row}); }, 0.1);
    ASSERT_EQ(ray.cells.size(), ref.size()) << "ray " << i;
    for (std::size_t k = 0; k < ref.size(); ++k) {
      EXPECT_EQ(ray.cells[k].col, ref[k].col);
      EXPECT_EQ(ray.cells[k].row, ref[k].row);
    }
    for (std::size_t k = 1; k < ray.cells.size(); ++k) {
      EXPECT_LE(std::abs(ray.cells[k].col - ray.cells[k - 1].col), 1);
      EXPECT_LE(std::abs(ray.cells[k].row - ray.cells[k - 1].row), 1);
    }
    if (ray.hit) EXPECT_LT(*ray.hit_index, ray.cells.size());
    EXPECT_LE(ray.range_m, 4.0);
    EXPECT_EQ(ray, raycast(truth, Action(x, y, 0.0), b, 4.0));
  }
}

TEST(Raycast, BeliefOverloadIgnoresOccupancy) {
  auto g = new_grid(5.0, 1.0, 1.0);
  g.set_log_odds({2, 0}, 6.0);
  const auto ray = raycast(g, Action(0.5, 0.5, 0.0), 0.0, 10.0);
  EXPECT_EQ(ray.cells.size(), 5u);
  EXPECT_FALSE(ray.hit);
}

}  // namespace
}  // namespace bkiexp
