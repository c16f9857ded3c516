#include "bkiexp/grid_map.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bkiexp {

namespace {

int cells_for(double extent_m, double resolution_m) {
  // Tolerate representation error so 24.0 / 0.2 yields 120, not 121.
  const double ratio = extent_m / resolution_m;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) < 1e-9 * std::max(1.0, rounded)) {
    return static_cast<int>(rounded);
  }
  return static_cast<int>(std::ceil(ratio));
}

std::string cell_str(CellIndex c) {
  return "(" + std::to_string(c.col) + "," + std::to_string(c.row) + ")";
}

}  // namespace

bool GridGeometry::contains(Point2 p) const {
  const double lx = p.x - origin_m.x;
  const double ly = p.y - origin_m.y;
  return lx >= 0.0 && ly >= 0.0 && lx <= width_m() && ly <= height_m();
}

CellIndex GridGeometry::world_to_cell(Point2 p) const {
  int c = static_cast<int>(std::floor((p.x - origin_m.x) / resolution_m));
  int r = static_cast<int>(std::floor((p.y - origin_m.y) / resolution_m));
  if (c == width_cells) c = width_cells - 1;
  if (r == height_cells) r = height_cells - 1;
  return {c, r};
}

Point2 GridGeometry::cell_center(CellIndex c) const {
  return {origin_m.x + (c.col + 0.5) * resolution_m, origin_m.y + (c.row + 0.5) * resolution_m};
}

GridGeometry make_geometry(double width_m, double height_m, double resolution_m) {
  if (!(width_m > 0.0) || !(height_m > 0.0) || !(resolution_m > 0.0)) {
    throw std::invalid_argument("grid dimensions and resolution must be positive");
  }
  GridGeometry g;
  g.width_cells = cells_for(width_m, resolution_m);
  g.height_cells = cells_for(height_m, resolution_m);
  g.resolution_m = resolution_m;
  return g;
}

OccupancyGrid new_grid(double width_m, double height_m, double resolution_m, double log_odds_clamp) {
  return OccupancyGrid(make_geometry(width_m, height_m, resolution_m), log_odds_clamp);
}

double log_odds_to_probability(double log_odds) { return 1.0 / (1.0 + std::exp(-log_odds)); }

double probability_to_log_odds(double p) { return std::log(p / (1.0 - p)); }

double binary_entropy_bits(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double log_odds_entropy_bits(double log_odds, double clamp) {
  if (std::abs(log_odds) >= clamp) return 0.0;
  return binary_entropy_bits(log_odds_to_probability(log_odds));
}

// ---------------------------------------------------------------------------

OccupancyGrid::OccupancyGrid(GridGeometry geometry, double log_odds_clamp)
    : geometry_(geometry), clamp_(log_odds_clamp) {
  if (geometry_.width_cells <= 0 || geometry_.height_cells <= 0 || !(geometry_.resolution_m > 0.0)) {
    throw std::invalid_argument("grid dimensions and resolution must be positive");
  }
  if (!(clamp_ > 0.0)) throw std::invalid_argument("log-odds clamp must be positive");
  log_odds_.assign(geometry_.cell_count(), 0.0);
}

std::size_t OccupancyGrid::checked(CellIndex c) const {
  if (!geometry_.contains(c)) throw std::out_of_range("cell " + cell_str(c) + " outside grid");
  return geometry_.linear(c);
}

double OccupancyGrid::probability(CellIndex c) const { return log_odds_to_probability(log_odds(c)); }

bool OccupancyGrid::saturated(CellIndex c) const { return std::abs(log_odds(c)) >= clamp_; }

void OccupancyGrid::set_log_odds(CellIndex c, double value) {
  log_odds_[checked(c)] = std::clamp(value, -clamp_, clamp_);
}

void OccupancyGrid::update_cell(CellIndex c, bool observed_occupied, const InverseSensorModel& model) {
  double& l = log_odds_[checked(c)];
  l = std::clamp(l + (observed_occupied ? model.l_occ : model.l_free), -clamp_, clamp_);
}

// ---------------------------------------------------------------------------

GroundTruthGrid::GroundTruthGrid(GridGeometry geometry, CellState fill) : geometry_(geometry) {
  if (geometry_.width_cells <= 0 || geometry_.height_cells <= 0 || !(geometry_.resolution_m > 0.0)) {
    throw std::invalid_argument("grid dimensions and resolution must be positive");
  }
  cells_.assign(geometry_.cell_count(), fill);
}

std::size_t GroundTruthGrid::checked(CellIndex c) const {
  if (!geometry_.contains(c)) throw std::out_of_range("cell " + cell_str(c) + " outside grid");
  return geometry_.linear(c);
}

CellState GroundTruthGrid::state(CellIndex c) const { return cells_[checked(c)]; }

void GroundTruthGrid::set_state(CellIndex c, CellState s) { cells_[checked(c)] = s; }

std::size_t GroundTruthGrid::count(CellState s) const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), s));
}

// ---------------------------------------------------------------------------

double cell_entropy(const OccupancyGrid& grid, CellIndex cell) {
  return log_odds_entropy_bits(grid.log_odds(cell), grid.log_odds_clamp());
}

double map_entropy(const OccupancyGrid& grid) {
  double total = 0.0;
  for (double l : grid.log_odds_data()) total += log_odds_entropy_bits(l, grid.log_odds_clamp());
  return total;
}

double coverage(const OccupancyGrid& grid, const GroundTruthGrid& truth, double known_threshold) {
  if (grid.width_cells() != truth.width_cells() || grid.height_cells() != truth.height_cells()) {
    throw std::invalid_argument("coverage: grid and ground truth dimensions differ");
  }
  if (!(known_threshold > 0.0 && known_threshold < 0.5)) {
    throw std::invalid_argument("coverage: known_threshold must lie in (0, 0.5)");
  }
  const auto data = grid.log_odds_data();
  std::size_t known = 0;
  for (double l : data) {
    if (std::abs(log_odds_to_probability(l) - 0.5) >= known_threshold) ++known;
  }
  return static_cast<double>(known) / static_cast<double>(data.size());
}

namespace {

// Distance along the ray at which it enters cell `c` (slab test).
double entry_distance(const GridGeometry& geometry, CellIndex c, Point2 origin, double dx, double dy) {
  const double res = geometry.resolution_m;
  const double lo[2] = {geometry.origin_m.x + c.col * res, geometry.origin_m.y + c.row * res};
  const double o[2] = {origin.x, origin.y};
  const double d[2] = {dx, dy};
  double enter = 0.0;
  for (int axis = 0; axis < 2; ++axis) {
    if (std::abs(d[axis]) < 1e-15) continue;
    const double t0 = (lo[axis] - o[axis]) / d[axis];
    const double t1 = (lo[axis] + res - o[axis]) / d[axis];
    enter = std::max(enter, std::min(t0, t1));
  }
  return enter;
}

}  // namespace

CellRay trace_ray(const GridGeometry& geometry, Point2 origin, double bearing, double max_range_m,
                  std::span<const CellState> blocked) {
  if (!geometry.contains(origin)) throw std::invalid_argument("raycast: origin outside grid");
  if (!(max_range_m > 0.0)) throw std::invalid_argument("raycast: max range must be positive");

  const double step = geometry.resolution_m / 10.0;
  const double dx = std::cos(bearing);
  const double dy = std::sin(bearing);
  const auto steps = static_cast<long>(std::floor(max_range_m / step + 1e-9));

  auto is_blocked = [&](CellIndex c) {
    return !blocked.empty() && blocked[geometry.linear(c)] == CellState::Occupied;
  };

  CellRay ray;
  ray.cells.reserve(static_cast<std::size_t>(max_range_m / geometry.resolution_m) * 2 + 2);
  CellIndex current = geometry.world_to_cell(origin);
  ray.cells.push_back(current);
  if (is_blocked(current)) {
    ray.hit = true;
    ray.hit_index = 0;
    return ray;
  }

  double travelled = 0.0;
  for (long k = 1; k <= steps; ++k) {
    const double t = static_cast<double>(k) * step;
    const Point2 p{origin.x + t * dx, origin.y + t * dy};
    if (!geometry.contains(p)) break;
    const CellIndex c = geometry.world_to_cell(p);
    travelled = t;
    if (c == current) continue;
    current = c;
    ray.cells.push_back(c);
    if (is_blocked(c)) {
      ray.hit = true;
      ray.hit_index = ray.cells.size() - 1;
      ray.range_m = std::clamp(entry_distance(geometry, c, origin, dx, dy), 0.0, t);
      return ray;
    }
  }
  ray.range_m = travelled;
  return ray;
}

CellRay raycast(const GroundTruthGrid& truth, const Action& origin, double bearing, double max_range_m) {
  return trace_ray(truth.geometry(), {origin.x_m, origin.y_m}, bearing, max_range_m, truth.cells());
}

CellRay raycast(const OccupancyGrid& grid, const Action& origin, double bearing, double max_range_m) {
  return trace_ray(grid.geometry(), {origin.x_m, origin.y_m}, bearing, max_range_m, {});
}

}  // namespace bkiexp
