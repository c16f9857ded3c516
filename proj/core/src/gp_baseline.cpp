#include "bkiexp/gp_baseline.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "bkiexp/errors.hpp"

namespace bkiexp {

Eigen::MatrixXd gram_matrix(std::span<const Action> xs, const KernelSpec& kspec) {
  const auto n = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    k(j, j) = kernel(xs[j], xs[j], kspec);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double v = kernel(xs[i], xs[j], kspec);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

GpModel gp_fit(const TrainingSet& train, const KernelSpec& kspec, double sigma2) {
  const auto start = std::chrono::steady_clock::now();
  if (train.empty()) throw std::invalid_argument("gp_fit: training set is empty");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("gp_fit: sigma2 must be positive");
  kspec.validate();

  GpModel model;
  model.train_ = train;
  model.kspec_ = kspec;
  model.sigma2_ = sigma2;

  const Eigen::MatrixXd gram = gram_matrix(train.actions(), kspec);
  const auto n = gram.rows();
  double jitter = 0.0;
  for (;;) {
    Eigen::MatrixXd a = gram;
    a.diagonal().array() += sigma2 + jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() == Eigen::Success && (llt.matrixLLT().diagonal().array() > 0.0).all()) {
      model.lower_ = llt.matrixL();
      break;
    }
    jitter = jitter == 0.0 ? 1e-10 : jitter * 10.0;
    if (jitter > 1e-6 * (1.0 + 1e-9)) {
      throw NumericalError("gp_fit: kernel matrix not positive definite after jitter escalation");
    }
  }
  model.jitter_ = jitter;

  const Eigen::Map<const Eigen::VectorXd> y(train.values().data(), n);
  const Eigen::VectorXd half = model.lower_.triangularView<Eigen::Lower>().solve(y);
  model.alpha_ = model.lower_.transpose().triangularView<Eigen::Upper>().solve(half);

  model.fit_time_s_ = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return model;
}

std::vector<MiPrediction> gp_predict(const GpModel& model, std::span<const Action> queries) {
  const auto xs = model.train().actions();
  const auto m = static_cast<Eigen::Index>(queries.size());

  const Eigen::MatrixXd kstar = cross_kernel(xs, queries, model.kernel_spec());
  const Eigen::VectorXd mean = kstar.transpose() * model.weights();
  const Eigen::MatrixXd v = model.lower().triangularView<Eigen::Lower>().solve(kstar);
  const Eigen::VectorXd explained = v.colwise().squaredNorm().transpose();
  const Eigen::VectorXd kbar = kstar.colwise().sum().transpose();

  std::vector<MiPrediction> out(static_cast<std::size_t>(m));
  for (Eigen::Index q = 0; q < m; ++q) {
    const double prior = kernel(queries[q], queries[q], model.kernel_spec());
    auto& p = out[static_cast<std::size_t>(q)];
    p.mean = mean(q);
    p.variance = std::max(0.0, prior - explained(q)) + model.sigma2();
    p.kbar = kbar(q);
  }
  return out;
}

}  // namespace bkiexp
