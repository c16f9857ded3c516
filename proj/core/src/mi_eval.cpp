#include "bkiexp/mi_eval.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

namespace bkiexp {

BeamMiDetail beam_mi_from_cells(std::span<const double> p, std::span<const double> h) {
  if (p.size() != h.size()) throw std::invalid_argument("beam_mi: probability/entropy size mismatch");
  const std::size_t n = p.size();

  BeamMiDetail out;
  for (double hi : h) out.prior_entropy_bits += hi;

  double reach = 1.0;  // probability every earlier cell was free
  double expected_posterior = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double prob = p[j] * reach;
    // Ideal update: c_0..c_j become certain, the rest are untouched.
    double posterior = 0.0;
    for (std::size_t i = j + 1; i < n; ++i) posterior += h[i];
    expected_posterior += prob * posterior;
    out.outcome_probability_sum += prob;
    reach *= 1.0 - p[j];
  }
  out.outcome_probability_sum += reach;  // miss: every cell known free

  out.mi_bits = std::max(0.0, out.prior_entropy_bits - expected_posterior);
  return out;
}

namespace {

double beam_mi_unchecked(const OccupancyGrid& grid, Point2 origin, double bearing, double max_range_m,
                         std::vector<double>& p, std::vector<double>& h) {
  const CellRay ray = trace_ray(grid.geometry(), origin, bearing, max_range_m, {});
  p.clear();
  h.clear();
  const double clamp = grid.log_odds_clamp();
  for (const CellIndex c : ray.cells) {
    const double l = grid.log_odds(c);
    p.push_back(log_odds_to_probability(l));
    h.push_back(log_odds_entropy_bits(l, clamp));
  }
  return beam_mi_from_cells(p, h).mi_bits;
}

}  // namespace

double beam_mi(const OccupancyGrid& grid, const Action& pose, double bearing, const SensorSpec& spec) {
  const Point2 origin{pose.x_m, pose.y_m};
  if (!grid.geometry().contains(origin)) throw std::invalid_argument("beam_mi: pose outside grid");
  std::vector<double> p;
  std::vector<double> h;
  return beam_mi_unchecked(grid, origin, bearing, spec.max_range_m, p, h);
}

MiResult action_mi(const OccupancyGrid& grid, const Action& action, const SensorSpec& spec) {
  const auto start = std::chrono::steady_clock::now();
  const Point2 origin{action.x_m, action.y_m};
  if (!grid.geometry().contains(origin)) throw std::invalid_argument("action_mi: action outside grid");

  MiResult result;
  std::vector<double> p;
  std::vector<double> h;
  for (double bearing : spec.bearings(action.heading_rad)) {
    const double bits = beam_mi_unchecked(grid, origin, bearing, spec.max_range_m, p, h);
    result.per_beam_bits.push_back(bits);
    result.mi_bits += bits;
  }
  result.eval_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::vector<double> normalize_for_display(std::span<const double> mi_bits) {
  std::vector<double> out(mi_bits.begin(), mi_bits.end());
  const double top = out.empty() ? 0.0 : *std::max_element(out.begin(), out.end());
  if (top > 0.0) {
    for (double& v : out) v /= top;
  }
  return out;
}

}  // namespace bkiexp
