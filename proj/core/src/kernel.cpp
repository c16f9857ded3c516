#include "bkiexp/kernel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bkiexp {

void KernelSpec::validate() const {
  if (!(length_scale > 0.0)) throw std::invalid_argument("kernel: length scale must be positive");
  if (!(heading_weight >= 0.0)) throw std::invalid_argument("kernel: heading weight must be >= 0");
}

double action_distance(const Action& a, const Action& b, double heading_weight) {
  const double dx = a.x_m - b.x_m;
  const double dy = a.y_m - b.y_m;
  double d2 = dx * dx + dy * dy;
  if (heading_weight > 0.0) {
    const double dpsi = wrap_angle(a.heading_rad - b.heading_rad);
    d2 += heading_weight * dpsi * dpsi;
  }
  return std::sqrt(d2);
}

double matern32(double r, double length_scale) {
  const double s = std::numbers::sqrt3 * r / length_scale;
  return (1.0 + s) * std::exp(-s);
}

double kernel(const Action& a, const Action& b, const KernelSpec& spec) {
  return matern32(action_distance(a, b, spec.heading_weight), spec.length_scale);
}

ActionColumns::ActionColumns(std::span<const Action> actions)
    : x(static_cast<Eigen::Index>(actions.size())),
      y(static_cast<Eigen::Index>(actions.size())),
      heading(static_cast<Eigen::Index>(actions.size())) {
  for (std::size_t j = 0; j < actions.size(); ++j) {
    const auto i = static_cast<Eigen::Index>(j);
    x(i) = actions[j].x_m;
    y(i) = actions[j].y_m;
    heading(i) = actions[j].heading_rad;
  }
}

void kernel_against(const ActionColumns& actions, const Action& a, const KernelSpec& spec,
                    Eigen::Ref<Eigen::VectorXd> out) {
  auto d2 = (actions.x - a.x_m).square() + (actions.y - a.y_m).square();
  auto k = out.array();
  if (spec.heading_weight > 0.0) {
    constexpr double kTwoPi = 2.0 * std::numbers::pi;
    const Eigen::ArrayXd dpsi = actions.heading - a.heading_rad;
    const Eigen::ArrayXd wrapped = dpsi - kTwoPi * ((dpsi + std::numbers::pi) / kTwoPi).floor();
    k = (std::numbers::sqrt3 / spec.length_scale) * (d2 + spec.heading_weight * wrapped.square()).sqrt();
  } else {
    k = (std::numbers::sqrt3 / spec.length_scale) * d2.sqrt();
  }
  k = (1.0 + k) * (-k).exp();
}

Eigen::MatrixXd cross_kernel(std::span<const Action> rows, std::span<const Action> cols, const KernelSpec& spec) {
  const ActionColumns r(rows);
  Eigen::MatrixXd out(r.size(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) kernel_against(r, cols[i], spec, out.col(static_cast<Eigen::Index>(i)));
  return out;
}

}  // namespace bkiexp
