#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "bkiexp/action.hpp"
#include "bkiexp/grid_map.hpp"

namespace bkiexp {

/// Generated maps keep the area around this point clear so the default start
/// pose is always free.
inline constexpr Point2 kDefaultStart{1.2, 1.2};

/// Boundary walls plus seeded one-cell-thick interior walls with door gaps,
/// forming rooms and corridors. Free space is 4-connected.
GroundTruthGrid generate_structured_map(double width_m, double height_m, double resolution_m, std::uint64_t seed);

struct EllipseObstacle {
  Point2 center;
  double semi_major = 1.0;
  double semi_minor = 1.0;
  double angle_rad = 0.0;

  bool contains(Point2 p) const;
};

/// Marks every non-boundary cell whose centre lies inside the ellipse as occupied.
void rasterize_ellipse(GroundTruthGrid& truth, const EllipseObstacle& e);

struct UnstructuredMap {
  GroundTruthGrid truth;
  std::vector<EllipseObstacle> obstacles;
};

/// Boundary walls plus seeded circular and elliptical obstacles. Blobs that
/// would disconnect free space or push the free fraction below 0.5 are
/// rejected and resampled.
GroundTruthGrid generate_unstructured_map(double width_m, double height_m, double resolution_m, std::uint64_t seed);
UnstructuredMap generate_unstructured_map_with_obstacles(double width_m, double height_m, double resolution_m,
                                                         std::uint64_t seed);

/// Long narrow corridor with rooms on both sides and furniture clutter inside
/// the rooms. Start pose: see cluttered_map_start().
GroundTruthGrid generate_cluttered_map(double width_m, double height_m, double resolution_m, std::uint64_t seed);
Action cluttered_map_start(double height_m);

/// Reads a P2/P5 PGM ground-truth map (one pixel per cell).
GroundTruthGrid load_map(const std::filesystem::path& path, double resolution_m = 0.2);

/// Cells 4-connected to `from` through free space.
std::vector<bool> reachable_free(const GroundTruthGrid& truth, CellIndex from);

/// True when every free cell is 4-connected to every other free cell.
bool free_space_connected(const GroundTruthGrid& truth);

/// Marks free cells not reachable from `from` as occupied.
void fill_unreachable(GroundTruthGrid& truth, CellIndex from);

}  // namespace bkiexp
