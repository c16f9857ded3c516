#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bkiexp/action.hpp"

namespace bkiexp {

struct CellIndex {
  int col = 0;
  int row = 0;

  friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Log-odds increments applied per observation.
struct InverseSensorModel {
  double l_occ = 0.85;
  double l_free = -0.4;
};

inline constexpr double kDefaultLogOddsClamp = 6.0;

/// Lattice geometry shared by the belief grid and the ground truth.
/// Cell (c, r) spans [c*res, (c+1)*res) x [r*res, (r+1)*res) relative to the
/// origin; points on the max edge map to the last cell.
struct GridGeometry {
  int width_cells = 0;
  int height_cells = 0;
  double resolution_m = 1.0;
  Point2 origin_m{};

  std::size_t cell_count() const {
    return static_cast<std::size_t>(width_cells) * static_cast<std::size_t>(height_cells);
  }
  double width_m() const { return width_cells * resolution_m; }
  double height_m() const { return height_cells * resolution_m; }

  bool contains(CellIndex c) const {
    return c.col >= 0 && c.row >= 0 && c.col < width_cells && c.row < height_cells;
  }
  bool contains(Point2 p) const;
  CellIndex world_to_cell(Point2 p) const;
  Point2 cell_center(CellIndex c) const;
  std::size_t linear(CellIndex c) const {
    return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(width_cells) +
           static_cast<std::size_t>(c.col);
  }

  friend bool operator==(const GridGeometry&, const GridGeometry&) = default;
};

class OccupancyGrid {
 public:
  OccupancyGrid(GridGeometry geometry, double log_odds_clamp = kDefaultLogOddsClamp);

  const GridGeometry& geometry() const { return geometry_; }
  int width_cells() const { return geometry_.width_cells; }
  int height_cells() const { return geometry_.height_cells; }
  double resolution_m() const { return geometry_.resolution_m; }
  double log_odds_clamp() const { return clamp_; }

  double log_odds(CellIndex c) const { return log_odds_[checked(c)]; }
  double probability(CellIndex c) const;
  /// True once the cell has reached either log-odds clamp.
  bool saturated(CellIndex c) const;

  /// Overwrites a cell's log-odds (clamped). Intended for tests and fixtures.
  void set_log_odds(CellIndex c, double value);
  void update_cell(CellIndex c, bool observed_occupied, const InverseSensorModel& model);

  std::span<const double> log_odds_data() const { return log_odds_; }

 private:
  std::size_t checked(CellIndex c) const;

  GridGeometry geometry_;
  double clamp_;
  std::vector<double> log_odds_;
};

enum class CellState : std::uint8_t { Free = 0, Occupied = 1 };

class GroundTruthGrid {
 public:
  explicit GroundTruthGrid(GridGeometry geometry, CellState fill = CellState::Free);

  const GridGeometry& geometry() const { return geometry_; }
  int width_cells() const { return geometry_.width_cells; }
  int height_cells() const { return geometry_.height_cells; }
  double resolution_m() const { return geometry_.resolution_m; }

  CellState state(CellIndex c) const;
  bool occupied(CellIndex c) const { return state(c) == CellState::Occupied; }
  void set_state(CellIndex c, CellState s);
  std::size_t count(CellState s) const;
  std::span<const CellState> cells() const { return cells_; }

  friend bool operator==(const GroundTruthGrid&, const GroundTruthGrid&) = default;

 private:
  std::size_t checked(CellIndex c) const;

  GridGeometry geometry_;
  std::vector<CellState> cells_;
};

struct CellRay {
  std::vector<CellIndex> cells;
  bool hit = false;
  std::optional<std::size_t> hit_index;
  double range_m = 0.0;

  friend bool operator==(const CellRay&, const CellRay&) = default;
};

/// Dimensions are ceil(width/res) x ceil(height/res); every cell starts at
/// log-odds 0.
OccupancyGrid new_grid(double width_m, double height_m, double resolution_m,
                       double log_odds_clamp = kDefaultLogOddsClamp);

GridGeometry make_geometry(double width_m, double height_m, double resolution_m);

double log_odds_to_probability(double log_odds);
double probability_to_log_odds(double p);

/// Binary entropy in bits with the continuous extension H(0) = H(1) = 0.
double binary_entropy_bits(double p);

/// Entropy of a cell given its log-odds; a cell at the clamp reports 0.
double log_odds_entropy_bits(double log_odds, double clamp);

double cell_entropy(const OccupancyGrid& grid, CellIndex cell);
double map_entropy(const OccupancyGrid& grid);

/// Fraction of cells with |p - 0.5| >= known_threshold.
double coverage(const OccupancyGrid& grid, const GroundTruthGrid& truth, double known_threshold = 0.25);

/// Traverses the lattice from the origin along `bearing` in sub-cell steps of
/// res/10, de-duplicating consecutive cells. Stops at the first occupied cell,
/// at max range, or at the grid boundary.
CellRay raycast(const GroundTruthGrid& truth, const Action& origin, double bearing, double max_range_m);

/// Geometry-only traversal over the belief grid; never reports a hit.
CellRay raycast(const OccupancyGrid& grid, const Action& origin, double bearing, double max_range_m);

/// Lower-level traversal used by both overloads; `blocked` may be empty.
CellRay trace_ray(const GridGeometry& geometry, Point2 origin, double bearing, double max_range_m,
                  std::span<const CellState> blocked);

}  // namespace bkiexp
