#pragma once

#include <vector>

#include "bkiexp/action.hpp"
#include "bkiexp/grid_map.hpp"

namespace bkiexp {

/// Belief thresholds for planning. Cells above `occupied_above` are
/// impassable; cells in [free_below, occupied_above] are unknown and cost
/// `unknown_cost_factor` times their step length.
struct TraversabilityConfig {
  double free_below = 0.35;
  double occupied_above = 0.65;
  double unknown_cost_factor = 2.0;
};

struct GridPath {
  std::vector<CellIndex> cells;  // start cell first, goal cell last
  double cost_m = 0.0;
};

/// 8-connected A* with Euclidean step costs and a Euclidean heuristic.
/// Diagonal moves may not cut the corner of an impassable cell.
/// Throws PlanningFailureError when the goal is believed occupied or
/// unreachable, std::invalid_argument when start or goal lie off the grid.
GridPath astar(const OccupancyGrid& grid, const Action& start, const Action& goal,
               const TraversabilityConfig& config = {});

/// Per-step cost multiplier for entering `c`; negative when impassable.
double traversal_factor(const OccupancyGrid& grid, CellIndex c, const TraversabilityConfig& config);

}  // namespace bkiexp
