#include "bkiexp/maps.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <random>

#include "bkiexp/pgm.hpp"

namespace bkiexp {

namespace {

using MapRng = std::mt19937_64;

void draw_boundary(GroundTruthGrid& t) {
  const int w = t.width_cells();
  const int h = t.height_cells();
  for (int c = 0; c < w; ++c) {
    t.set_state({c, 0}, CellState::Occupied);
    t.set_state({c, h - 1}, CellState::Occupied);
  }
  for (int r = 0; r < h; ++r) {
    t.set_state({0, r}, CellState::Occupied);
    t.set_state({w - 1, r}, CellState::Occupied);
  }
}

void fill_cells(GroundTruthGrid& t, int c0, int r0, int c1, int r1, CellState s) {
  c0 = std::max(c0, 0);
  r0 = std::max(r0, 0);
  c1 = std::min(c1, t.width_cells() - 1);
  r1 = std::min(r1, t.height_cells() - 1);
  for (int r = r0; r <= r1; ++r) {
    for (int c = c0; c <= c1; ++c) t.set_state({c, r}, s);
  }
}

/// Frees interior cells whose centres lie within `radius` of `p`.
void clear_disc(GroundTruthGrid& t, Point2 p, double radius) {
  const auto& geo = t.geometry();
  for (int r = 1; r + 1 < t.height_cells(); ++r) {
    for (int c = 1; c + 1 < t.width_cells(); ++c) {
      const Point2 q = geo.cell_center({c, r});
      if (std::hypot(q.x - p.x, q.y - p.y) <= radius) t.set_state({c, r}, CellState::Free);
    }
  }
}

int uniform_int(MapRng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

double uniform(MapRng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

CellIndex start_cell(const GroundTruthGrid& t, Point2 start) { return t.geometry().world_to_cell(start); }

}  // namespace

bool EllipseObstacle::contains(Point2 p) const {
  const double dx = p.x - center.x;
  const double dy = p.y - center.y;
  const double u = std::cos(angle_rad) * dx + std::sin(angle_rad) * dy;
  const double v = -std::sin(angle_rad) * dx + std::cos(angle_rad) * dy;
  return (u * u) / (semi_major * semi_major) + (v * v) / (semi_minor * semi_minor) <= 1.0;
}

void rasterize_ellipse(GroundTruthGrid& truth, const EllipseObstacle& e) {
  const auto& geo = truth.geometry();
  for (int r = 1; r + 1 < truth.height_cells(); ++r) {
    for (int c = 1; c + 1 < truth.width_cells(); ++c) {
      if (e.contains(geo.cell_center({c, r}))) truth.set_state({c, r}, CellState::Occupied);
    }
  }
}

std::vector<bool> reachable_free(const GroundTruthGrid& truth, CellIndex from) {
  const auto& geo = truth.geometry();
  std::vector<bool> seen(geo.cell_count(), false);
  if (!geo.contains(from) || truth.occupied(from)) return seen;
  std::deque<CellIndex> queue{from};
  seen[geo.linear(from)] = true;
  static constexpr int kDc[4] = {1, -1, 0, 0};
  static constexpr int kDr[4] = {0, 0, 1, -1};
  while (!queue.empty()) {
    const CellIndex c = queue.front();
    queue.pop_front();
    for (int k = 0; k < 4; ++k) {
      const CellIndex n{c.col + kDc[k], c.row + kDr[k]};
      if (!geo.contains(n) || truth.occupied(n)) continue;
      const std::size_t i = geo.linear(n);
      if (seen[i]) continue;
      seen[i] = true;
      queue.push_back(n);
    }
  }
  return seen;
}

bool free_space_connected(const GroundTruthGrid& truth) {
  const auto cells = truth.cells();
  const auto first = std::find(cells.begin(), cells.end(), CellState::Free);
  if (first == cells.end()) return true;
  const auto idx = static_cast<std::size_t>(first - cells.begin());
  const int w = truth.width_cells();
  const auto seen = reachable_free(truth, {static_cast<int>(idx % static_cast<std::size_t>(w)),
                                           static_cast<int>(idx / static_cast<std::size_t>(w))});
  return static_cast<std::size_t>(std::count(seen.begin(), seen.end(), true)) == truth.count(CellState::Free);
}

void fill_unreachable(GroundTruthGrid& truth, CellIndex from) {
  const auto seen = reachable_free(truth, from);
  const auto& geo = truth.geometry();
  for (int r = 0; r < truth.height_cells(); ++r) {
    for (int c = 0; c < truth.width_cells(); ++c) {
      if (!seen[geo.linear({c, r})]) truth.set_state({c, r}, CellState::Occupied);
    }
  }
}

GroundTruthGrid generate_structured_map(double width_m, double height_m, double resolution_m, std::uint64_t seed) {
  GroundTruthGrid t(make_geometry(width_m, height_m, resolution_m));
  MapRng rng(seed);
  const int w = t.width_cells();
  const int h = t.height_cells();
  const auto cells_of = [&](double m) { return std::max(1, static_cast<int>(std::lround(m / resolution_m))); };
  const int door = cells_of(1.6);
  draw_boundary(t);

  // Vertical walls split the map into four bays, each with one or two doors.
  std::vector<int> walls{0};
  for (int k = 1; k <= 3; ++k) {
    const int jitter = cells_of(0.6);
    const int col = std::clamp(k * w / 4 + uniform_int(rng, -jitter, jitter), 2, w - 3);
    walls.push_back(col);
    fill_cells(t, col, 1, col, h - 2, CellState::Occupied);
    const int doors = uniform_int(rng, 1, 2);
    for (int d = 0; d < doors; ++d) {
      const int r0 = uniform_int(rng, 1, std::max(1, h - 1 - door));
      fill_cells(t, col, r0, col, r0 + door - 1, CellState::Free);
    }
  }
  walls.push_back(w - 1);

  // Most bays get a horizontal wall with one door, forming rooms.
  std::bernoulli_distribution has_wall(0.75);
  for (std::size_t bay = 0; bay + 1 < walls.size(); ++bay) {
    if (!has_wall(rng)) continue;
    const int jitter = cells_of(1.0);
    const int row = std::clamp(h / 2 + uniform_int(rng, -jitter, jitter), 2, h - 3);
    const int c0 = walls[bay] + 1;
    const int c1 = walls[bay + 1] - 1;
    if (c1 - c0 < door + 2) continue;
    fill_cells(t, c0, row, c1, row, CellState::Occupied);
    const int d0 = uniform_int(rng, c0, c1 - door + 1);
    fill_cells(t, d0, row, d0 + door - 1, row, CellState::Free);
  }

  clear_disc(t, kDefaultStart, 1.0);
  fill_unreachable(t, start_cell(t, kDefaultStart));
  return t;
}

UnstructuredMap generate_unstructured_map_with_obstacles(double width_m, double height_m, double resolution_m,
                                                         std::uint64_t seed) {
  UnstructuredMap out{GroundTruthGrid(make_geometry(width_m, height_m, resolution_m)), {}};
  GroundTruthGrid& t = out.truth;
  MapRng rng(seed);
  draw_boundary(t);
  const auto& geo = t.geometry();
  const double w = geo.width_m();
  const double h = geo.height_m();
  const std::size_t total = geo.cell_count();

  constexpr int kTargetBlobs = 16;
  constexpr int kMaxAttempts = 400;
  constexpr double kStartClearance = 1.5;
  constexpr double kBlobGap = 0.6;
  std::bernoulli_distribution circle(0.4);

  for (int attempt = 0; attempt < kMaxAttempts && std::ssize(out.obstacles) < kTargetBlobs; ++attempt) {
    EllipseObstacle e;
    e.center = {uniform(rng, 0.5, w - 0.5), uniform(rng, 0.5, h - 0.5)};
    e.semi_major = uniform(rng, 0.4, 1.5);
    e.semi_minor = circle(rng) ? e.semi_major : uniform(rng, 0.3, e.semi_major);
    e.angle_rad = uniform(rng, 0.0, std::numbers::pi);

    if (std::hypot(e.center.x - kDefaultStart.x, e.center.y - kDefaultStart.y) < e.semi_major + kStartClearance) {
      continue;
    }
    const bool overlaps = std::any_of(out.obstacles.begin(), out.obstacles.end(), [&](const EllipseObstacle& o) {
      return std::hypot(e.center.x - o.center.x, e.center.y - o.center.y) < e.semi_major + o.semi_major + kBlobGap;
    });
    if (overlaps) continue;

    GroundTruthGrid trial = t;
    rasterize_ellipse(trial, e);
    if (trial.count(CellState::Free) * 2 < total) continue;
    if (!free_space_connected(trial)) continue;
    t = std::move(trial);
    out.obstacles.push_back(e);
  }
  fill_unreachable(t, start_cell(t, kDefaultStart));
  return out;
}

GroundTruthGrid generate_unstructured_map(double width_m, double height_m, double resolution_m,
                                          std::uint64_t seed) {
  return generate_unstructured_map_with_obstacles(width_m, height_m, resolution_m, seed).truth;
}

Action cluttered_map_start(double height_m) { return Action(1.1, height_m / 2.0 + 0.1, 0.0); }

GroundTruthGrid generate_cluttered_map(double width_m, double height_m, double resolution_m, std::uint64_t seed) {
  GroundTruthGrid t(make_geometry(width_m, height_m, resolution_m));
  MapRng rng(seed);
  draw_boundary(t);
  const int w = t.width_cells();
  const int h = t.height_cells();
  const auto cells_of = [&](double m) { return std::max(1, static_cast<int>(std::lround(m / resolution_m))); };

  // Corridor of ~1.4 m along the middle, walled on both sides.
  const int mid = h / 2;
  const int half = cells_of(0.7);
  const int lower_wall = mid - half - 1;
  const int upper_wall = mid + half + 1;
  fill_cells(t, 1, lower_wall, w - 2, lower_wall, CellState::Occupied);
  fill_cells(t, 1, upper_wall, w - 2, upper_wall, CellState::Occupied);

  struct Room {
    int c0, c1, r0, r1;
    bool above;
  };
  std::vector<Room> rooms;
  const int door = cells_of(1.0);
  for (const bool above : {false, true}) {
    const int r0 = above ? upper_wall + 1 : 1;
    const int r1 = above ? h - 2 : lower_wall - 1;
    int c = 1;
    while (c < w - 2) {
      const int width = std::min(w - 2 - c + 1, cells_of(uniform(rng, 3.2, 4.8)));
      int c1 = c + width - 1;
      if (w - 2 - c1 < cells_of(2.4)) c1 = w - 2;  // no sliver rooms at the far end
      if (c1 < w - 2) fill_cells(t, c1 + 1, r0, c1 + 1, r1, CellState::Occupied);
      rooms.push_back({c, c1, r0, r1, above});
      c = c1 + 2;
    }
  }

  std::bernoulli_distribution side_door(0.3);
  for (const auto& room : rooms) {
    if (room.c1 - room.c0 + 1 < door + 2) continue;
    const int d0 = uniform_int(rng, room.c0 + 1, room.c1 - door);
    const int wall_row = room.above ? upper_wall : lower_wall;
    fill_cells(t, d0, wall_row, d0 + door - 1, wall_row, CellState::Free);
    if (room.c1 + 1 < w - 2 && side_door(rng) && room.r1 - room.r0 > door + 2) {
      const int s0 = uniform_int(rng, room.r0 + 1, room.r1 - door);
      fill_cells(t, room.c1 + 1, s0, room.c1 + 1, s0 + door - 1, CellState::Free);
    }
  }

  // Furniture: small rectangular blocks that must not disconnect free space.
  for (const auto& room : rooms) {
    const int pieces = uniform_int(rng, 1, 3);
    for (int p = 0; p < pieces; ++p) {
      const int bw = cells_of(uniform(rng, 0.4, 1.0));
      const int bh = cells_of(uniform(rng, 0.4, 1.0));
      const int margin = 2;
      if (room.c1 - room.c0 - 2 * margin < bw || room.r1 - room.r0 - 2 * margin < bh) continue;
      const int c0 = uniform_int(rng, room.c0 + margin, room.c1 - margin - bw + 1);
      const int r0 = uniform_int(rng, room.r0 + margin, room.r1 - margin - bh + 1);
      GroundTruthGrid trial = t;
      fill_cells(trial, c0, r0, c0 + bw - 1, r0 + bh - 1, CellState::Occupied);
      if (free_space_connected(trial)) t = std::move(trial);
    }
  }

  const Action start = cluttered_map_start(t.geometry().height_m());
  fill_unreachable(t, start_cell(t, {start.x_m, start.y_m}));
  return t;
}

GroundTruthGrid load_map(const std::filesystem::path& path, double resolution_m) {
  return read_pgm(path, resolution_m);
}

}  // namespace bkiexp
