#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bkiexp/bki.hpp"
#include "bkiexp/kernel.hpp"

namespace bkiexp {

/// Zero-mean GP regression over actions with a Cholesky factor of
/// (K + (sigma2 + jitter) I).
class GpModel {
 public:
  const TrainingSet& train() const { return train_; }
  const KernelSpec& kernel_spec() const { return kspec_; }
  double sigma2() const { return sigma2_; }
  double jitter() const { return jitter_; }
  double fit_time_s() const { return fit_time_s_; }
  const Eigen::MatrixXd& lower() const { return lower_; }
  const Eigen::VectorXd& weights() const { return alpha_; }

 private:
  friend GpModel gp_fit(const TrainingSet&, const KernelSpec&, double);

  TrainingSet train_;
  KernelSpec kspec_;
  double sigma2_ = 0.0;
  double jitter_ = 0.0;
  double fit_time_s_ = 0.0;
  Eigen::MatrixXd lower_;
  Eigen::VectorXd alpha_;
};

Eigen::MatrixXd gram_matrix(std::span<const Action> xs, const KernelSpec& kspec);

/// Factorizes K + sigma2 I, escalating diagonal jitter from 1e-10 up to 1e-6
/// before giving up with NumericalError.
GpModel gp_fit(const TrainingSet& train, const KernelSpec& kspec, double sigma2);

/// mean = k*^T (K + sigma2 I)^-1 y,
/// variance = k(x*, x*) - k*^T (K + sigma2 I)^-1 k* + sigma2.
std::vector<MiPrediction> gp_predict(const GpModel& model, std::span<const Action> queries);

}  // namespace bkiexp
