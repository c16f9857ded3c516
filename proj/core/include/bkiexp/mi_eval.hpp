#pragma once

#include <span>
#include <vector>

#include "bkiexp/action.hpp"
#include "bkiexp/grid_map.hpp"
#include "bkiexp/sensor_model.hpp"

namespace bkiexp {

struct MiResult {
  double mi_bits = 0.0;
  std::vector<double> per_beam_bits;
  double eval_time_s = 0.0;
};

struct BeamMiDetail {
  double mi_bits = 0.0;
  double prior_entropy_bits = 0.0;
  /// Sum of P(z) over the n+1 outcomes (hit at c_1..c_n, or miss).
  double outcome_probability_sum = 0.0;
};

/// Expected entropy reduction along one ray whose cells have occupancy
/// probabilities `p` and current entropies `h`. Outcome j (hit at cell j) has
/// probability p_j * prod_{i<j}(1 - p_i); the miss outcome has prod_i(1 - p_i).
/// After outcome j the cells before j and cell j are known exactly and cells
/// after j keep their prior entropy; after a miss every cell is known.
BeamMiDetail beam_mi_from_cells(std::span<const double> p, std::span<const double> h);

/// MI of a single beam over the current belief. The ray is traversed to max
/// range (or the grid edge) regardless of believed occupancy.
double beam_mi(const OccupancyGrid& grid, const Action& pose, double bearing, const SensorSpec& spec);

/// Sum of beam MI over the sensor's bearings centred on the action heading.
MiResult action_mi(const OccupancyGrid& grid, const Action& action, const SensorSpec& spec);

/// Divides by the largest value so the set spans [0, 1] (display only).
std::vector<double> normalize_for_display(std::span<const double> mi_bits);

}  // namespace bkiexp
