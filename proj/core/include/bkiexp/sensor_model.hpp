#pragma once

#include <optional>
#include <vector>

#include "bkiexp/action.hpp"
#include "bkiexp/grid_map.hpp"

namespace bkiexp {

/// Beam-based range sensor with a symmetric field of view. Exactly one of
/// `beam_step_rad` and `beam_count` is set.
struct SensorSpec {
  double fov_rad = 1.5;  // half-angle
  std::optional<double> beam_step_rad = 0.05;
  std::optional<int> beam_count;
  double max_range_m = 6.0;

  static SensorSpec from_step(double fov_rad, double step_rad, double max_range_m);
  static SensorSpec from_count(double fov_rad, int count, double max_range_m);

  void validate() const;
  /// floor(2*fov/step) + 1 when a step is given.
  int num_beams() const;
  /// Absolute bearings spaced evenly over [heading - fov, heading + fov].
  std::vector<double> bearings(double heading_rad) const;
};

struct BeamRecord {
  double bearing_rad = 0.0;
  double range_m = 0.0;
  bool hit = false;
  CellRay ray;
};

struct BeamScan {
  Action pose;
  std::vector<BeamRecord> beams;
};

/// Noise-free scan against ground truth. Throws InvalidPoseError when the pose
/// is outside the grid or on an occupied cell.
BeamScan simulate_scan(const GroundTruthGrid& truth, const Action& pose, const SensorSpec& spec);

/// Pre-hit cells are updated free and the hit cell occupied. A cell crossed by
/// several beams of the same scan is updated once, by the first beam to touch it.
void integrate_scan(OccupancyGrid& grid, const BeamScan& scan, const InverseSensorModel& model);

}  // namespace bkiexp
