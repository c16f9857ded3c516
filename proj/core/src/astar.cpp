#include "bkiexp/astar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <utility>

#include "bkiexp/errors.hpp"

namespace bkiexp {

double traversal_factor(const OccupancyGrid& grid, CellIndex c, const TraversabilityConfig& config) {
  const double p = grid.probability(c);
  if (p > config.occupied_above) return -1.0;
  if (p >= config.free_below) return config.unknown_cost_factor;
  return 1.0;
}

GridPath astar(const OccupancyGrid& grid, const Action& start, const Action& goal,
               const TraversabilityConfig& config) {
  const auto& geo = grid.geometry();
  const Point2 sp{start.x_m, start.y_m};
  const Point2 gp{goal.x_m, goal.y_m};
  if (!geo.contains(sp) || !geo.contains(gp)) throw std::invalid_argument("astar: start or goal outside grid");
  const CellIndex s = geo.world_to_cell(sp);
  const CellIndex g = geo.world_to_cell(gp);
  if (traversal_factor(grid, s, config) < 0.0) throw PlanningFailureError("astar: start believed occupied");
  if (traversal_factor(grid, g, config) < 0.0) throw PlanningFailureError("astar: goal believed occupied");

  const double res = geo.resolution_m;
  const std::size_t n = geo.cell_count();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> cost(n, kInf);
  std::vector<std::size_t> parent(n, n);
  std::vector<bool> closed(n, false);

  auto heuristic = [&](CellIndex c) {
    return res * std::hypot(static_cast<double>(c.col - g.col), static_cast<double>(c.row - g.row));
  };
  auto cell_of = [&](std::size_t i) {
    return CellIndex{static_cast<int>(i % static_cast<std::size_t>(geo.width_cells)),
                     static_cast<int>(i / static_cast<std::size_t>(geo.width_cells))};
  };

  using Entry = std::pair<double, std::size_t>;  // (f, linear index); ties broken by index
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  const std::size_t si = geo.linear(s);
  const std::size_t gi = geo.linear(g);
  cost[si] = 0.0;
  open.emplace(heuristic(s), si);

  static constexpr int kDc[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  static constexpr int kDr[8] = {0, 0, 1, -1, 1, -1, 1, -1};

  while (!open.empty()) {
    const std::size_t ci = open.top().second;
    open.pop();
    if (closed[ci]) continue;
    closed[ci] = true;
    if (ci == gi) break;
    const CellIndex c = cell_of(ci);
    for (int k = 0; k < 8; ++k) {
      const CellIndex nb{c.col + kDc[k], c.row + kDr[k]};
      if (!geo.contains(nb)) continue;
      const double factor = traversal_factor(grid, nb, config);
      if (factor < 0.0) continue;
      const bool diagonal = kDc[k] != 0 && kDr[k] != 0;
      if (diagonal && (traversal_factor(grid, {c.col + kDc[k], c.row}, config) < 0.0 ||
                       traversal_factor(grid, {c.col, c.row + kDr[k]}, config) < 0.0)) {
        continue;
      }
      const std::size_t ni = geo.linear(nb);
      if (closed[ni]) continue;
      const double step = res * (diagonal ? std::numbers::sqrt2 : 1.0) * factor;
      const double candidate = cost[ci] + step;
      if (candidate < cost[ni]) {
        cost[ni] = candidate;
        parent[ni] = ci;
        open.emplace(candidate + heuristic(nb), ni);
      }
    }
  }

  if (!closed[gi]) throw PlanningFailureError("astar: goal unreachable");

  GridPath path;
  path.cost_m = cost[gi];
  for (std::size_t i = gi; i != n; i = parent[i]) path.cells.push_back(cell_of(i));
  std::reverse(path.cells.begin(), path.cells.end());
  return path;
}

}  // namespace bkiexp
