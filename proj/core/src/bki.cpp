#include "bkiexp/bki.hpp"

#include <cmath>
#include <stdexcept>

namespace bkiexp {

void BkiHyperparams::validate() const {
  if (!(zeta > 0.0)) throw std::invalid_argument("bki: zeta must be positive");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("bki: sigma2 must be positive");
  if (!std::isfinite(mu0)) throw std::invalid_argument("bki: mu0 must be finite");
}

void TrainingSet::add(const Action& action, double mi_bits) {
  if (!std::isfinite(mi_bits) || mi_bits < 0.0) {
    throw std::invalid_argument("training set: MI values must be finite and non-negative");
  }
  if (!std::isfinite(action.x_m) || !std::isfinite(action.y_m) || !std::isfinite(action.heading_rad)) {
    throw std::invalid_argument("training set: action must be finite");
  }
  actions_.push_back(action);
  values_.push_back(mi_bits);
}

std::optional<std::size_t> TrainingSet::find(const Action& a) const {
  for (std::size_t i = 0; i < actions_.size(); ++i) {
    if (actions_[i] == a) return i;
  }
  return std::nullopt;
}

void add_sample(TrainingSet& train, const Action& action, double mi_bits) { train.add(action, mi_bits); }

MiPrediction bki_predict_one(const TrainingSet& train, const Action& query, const KernelSpec& kspec,
                             const BkiHyperparams& hp) {
  const auto xs = train.actions();
  const auto ys = train.values();
  double kbar = 0.0;
  double ybar = 0.0;
  // Fixed index order, no cutoff on small kernel values.
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double k = kernel(query, xs[i], kspec);
    kbar += k;
    ybar += k * ys[i];
  }
  const double denom = hp.zeta + kbar;
  return {(ybar + hp.zeta * hp.mu0) / denom, hp.sigma2 / denom, kbar};
}

std::vector<MiPrediction> bki_predict(const TrainingSet& train, std::span<const Action> queries,
                                      const KernelSpec& kspec, const BkiHyperparams& hp) {
  kspec.validate();
  hp.validate();
  const auto xs = train.actions();
  const auto ys = train.values();
  const ActionColumns qs(queries);
  const Eigen::Index m = qs.size();

  // Accumulate one training point at a time over all queries, so each
  // query's sums still run in training-index order.
  Eigen::VectorXd kbar = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd ybar = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd k(m);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    kernel_against(qs, xs[i], kspec, k);
    kbar += k;
    ybar += ys[i] * k;
  }

  std::vector<MiPrediction> out(queries.size());
  for (Eigen::Index j = 0; j < m; ++j) {
    const double denom = hp.zeta + kbar(j);
    out[static_cast<std::size_t>(j)] = {(ybar(j) + hp.zeta * hp.mu0) / denom, hp.sigma2 / denom, kbar(j)};
  }
  return out;
}

}  // namespace bkiexp
