#pragma once

#include <optional>

#include "ranksieve/model.hpp"
#include "ranksieve/synth.hpp"

namespace ranksieve {

/// k_hat = min{k : sum of the k largest |x_i| >= 0.9999 ||x||_1} and
/// I(x) = {i : |x_i| >= k_hat-th largest |x|}. Ties sorted by index.
struct NonzeroSet {
  Index k_hat = 0;
  IndexSet indices;  // ascending
};

NonzeroSet nonzero_rule(const Vector& x);

struct MetricsReport {
  double val = 0;
  double eta_kkt = 0;
  double l1_err = 0;
  double l2_err = 0;
  double me = 0;
  Index fp = 0;
  Index fn = 0;
  Index k_hat = 0;
  std::optional<double> cr;
};

/// |support ∩ I(reference)| / |support|.
double correct_ratio(const IndexSet& support, const Vector& reference);

MetricsReport evaluate(const ProblemData& data, const Vector& x, const Vector& u,
                       const Vector& alpha, const Vector& x_true,
                       const CovarianceDescriptor& sigma_x, const IndexSet* sieve_support = nullptr,
                       const Vector* reference = nullptr);

}  // namespace ranksieve
