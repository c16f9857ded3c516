#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "bkiexp/action.hpp"
#include "bkiexp/kernel.hpp"

namespace bkiexp {

/// Conjugate-Gaussian hyperparameters: prior confidence zeta, likelihood
/// variance sigma2 and prior mean mu0.
struct BkiHyperparams {
  double zeta = 1e-3;
  double sigma2 = 1e-4;
  double mu0 = 0.0;

  void validate() const;
};

/// Explicitly evaluated (action, MI) pairs.
class TrainingSet {
 public:
  TrainingSet() = default;

  void add(const Action& action, double mi_bits);

  std::size_t size() const { return actions_.size(); }
  bool empty() const { return actions_.empty(); }
  std::span<const Action> actions() const { return actions_; }
  std::span<const double> values() const { return values_; }

  /// Index of the first sample whose action equals `a` exactly.
  std::optional<std::size_t> find(const Action& a) const;

 private:
  std::vector<Action> actions_;
  std::vector<double> values_;
};

struct MiPrediction {
  double mean = 0.0;
  double variance = 0.0;
  double kbar = 0.0;
};

/// Appends a sample. Rejects non-finite or negative MI with std::invalid_argument.
void add_sample(TrainingSet& train, const Action& action, double mi_bits);

/// Closed-form posterior at one query:
///   kbar = sum_i k(x*, x_i),  ybar = sum_i k(x*, x_i) y_i
///   mean = (ybar + zeta mu0) / (zeta + kbar),  variance = sigma2 / (zeta + kbar)
MiPrediction bki_predict_one(const TrainingSet& train, const Action& query, const KernelSpec& kspec,
                             const BkiHyperparams& hp);

std::vector<MiPrediction> bki_predict(const TrainingSet& train, std::span<const Action> queries,
                                      const KernelSpec& kspec, const BkiHyperparams& hp);

}  // namespace bkiexp
