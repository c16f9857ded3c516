#include "bkiexp/sensor_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bkiexp/errors.hpp"

namespace bkiexp {

SensorSpec SensorSpec::from_step(double fov_rad, double step_rad, double max_range_m) {
  SensorSpec s;
  s.fov_rad = fov_rad;
  s.beam_step_rad = step_rad;
  s.beam_count.reset();
  s.max_range_m = max_range_m;
  s.validate();
  return s;
}

SensorSpec SensorSpec::from_count(double fov_rad, int count, double max_range_m) {
  SensorSpec s;
  s.fov_rad = fov_rad;
  s.beam_step_rad.reset();
  s.beam_count = count;
  s.max_range_m = max_range_m;
  s.validate();
  return s;
}

void SensorSpec::validate() const {
  if (!(fov_rad > 0.0 && fov_rad <= std::numbers::pi)) {
    throw std::invalid_argument("sensor: fov must lie in (0, pi]");
  }
  if (!(max_range_m > 0.0)) throw std::invalid_argument("sensor: max range must be positive");
  if (beam_step_rad.has_value() == beam_count.has_value()) {
    throw std::invalid_argument("sensor: specify exactly one of beam step and beam count");
  }
  if (beam_step_rad && !(*beam_step_rad > 0.0)) {
    throw std::invalid_argument("sensor: beam step must be positive");
  }
  if (beam_count && *beam_count < 1) throw std::invalid_argument("sensor: beam count must be >= 1");
}

int SensorSpec::num_beams() const {
  if (beam_count) return *beam_count;
  return static_cast<int>(std::floor(2.0 * fov_rad / *beam_step_rad + 1e-9)) + 1;
}

std::vector<double> SensorSpec::bearings(double heading_rad) const {
  validate();
  const int n = num_beams();
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  if (n == 1) {
    out.push_back(heading_rad);
    return out;
  }
  const double start = heading_rad - fov_rad;
  const double spacing = beam_step_rad ? *beam_step_rad : 2.0 * fov_rad / (n - 1);
  for (int i = 0; i < n; ++i) out.push_back(start + i * spacing);
  return out;
}

BeamScan simulate_scan(const GroundTruthGrid& truth, const Action& pose, const SensorSpec& spec) {
  const auto& geo = truth.geometry();
  const Point2 origin{pose.x_m, pose.y_m};
  if (!geo.contains(origin)) throw InvalidPoseError("simulate_scan: pose outside grid");
  if (truth.occupied(geo.world_to_cell(origin))) {
    throw InvalidPoseError("simulate_scan: pose on an occupied cell");
  }

  BeamScan scan;
  scan.pose = pose;
  for (double bearing : spec.bearings(pose.heading_rad)) {
    BeamRecord beam;
    beam.bearing_rad = bearing;
    beam.ray = trace_ray(geo, origin, bearing, spec.max_range_m, truth.cells());
    beam.hit = beam.ray.hit;
    beam.range_m = beam.hit ? beam.ray.range_m : spec.max_range_m;
    scan.beams.push_back(std::move(beam));
  }
  return scan;
}

void integrate_scan(OccupancyGrid& grid, const BeamScan& scan, const InverseSensorModel& model) {
  const auto& geo = grid.geometry();
  std::vector<bool> touched(geo.cell_count(), false);
  for (const auto& beam : scan.beams) {
    const auto& cells = beam.ray.cells;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (!geo.contains(cells[i])) throw std::out_of_range("integrate_scan: ray leaves the grid");
      const std::size_t idx = geo.linear(cells[i]);
      if (touched[idx]) continue;
      touched[idx] = true;
      const bool occupied = beam.hit && beam.ray.hit_index && i == *beam.ray.hit_index;
      grid.update_cell(cells[i], occupied, model);
    }
  }
}

}  // namespace bkiexp
