#pragma once

#include <Eigen/Core>

#include <span>

#include "bkiexp/action.hpp"

namespace bkiexp {

enum class KernelFamily { Matern32 };

/// Matern kernel over SE(2) actions. Only nu = 3/2 is implemented:
///   k(r) = (1 + sqrt(3) r / l) exp(-sqrt(3) r / l)
/// with r = sqrt(dx^2 + dy^2 + w * wrap(dpsi)^2). The heading weight w
/// defaults to 0 (positional kernel).
struct KernelSpec {
  KernelFamily family = KernelFamily::Matern32;
  double length_scale = 1.0;
  double heading_weight = 0.0;

  void validate() const;
};

double action_distance(const Action& a, const Action& b, double heading_weight = 0.0);

double matern32(double r, double length_scale);

double kernel(const Action& a, const Action& b, const KernelSpec& spec);

/// Actions stored column-wise so kernel rows can be evaluated in bulk.
struct ActionColumns {
  Eigen::ArrayXd x;
  Eigen::ArrayXd y;
  Eigen::ArrayXd heading;

  explicit ActionColumns(std::span<const Action> actions);
  Eigen::Index size() const { return x.size(); }
};

/// out[j] = k(actions[j], a) for every stored action.
void kernel_against(const ActionColumns& actions, const Action& a, const KernelSpec& spec,
                    Eigen::Ref<Eigen::VectorXd> out);

/// Matrix with entry (j, i) = k(rows[j], cols[i]).
Eigen::MatrixXd cross_kernel(std::span<const Action> rows, std::span<const Action> cols, const KernelSpec& spec);

}  // namespace bkiexp
