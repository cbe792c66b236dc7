#pragma once

#include <cstdint>

#include "ranksieve/model.hpp"

namespace ranksieve {

/// Simulation settings for the rank-score lambda:
///   lambda = c * quantile_{1 - alpha0} ||S_n||_inf,  S_n = -2/(n(n-1)) X^T (2r - (n+1))
/// with r a uniform random permutation of 1..n.
struct LambdaSpec {
  double c = 1.1;
  double alpha0 = 0.10;
  int draws = 1000;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Nearest-rank empirical quantile; returns 1e-12 when the quantile is zero.
double rank_lambda(const Matrix& X, const LambdaSpec& spec);

/// Standard normal quantile; |error| well below 1e-12 on (0, 1).
double inverse_normal_cdf(double prob);

/// 1.1 * Phi^{-1}(1 - 0.05 / (2n)).
double sqrt_lasso_lambda(Index n);

}  // namespace ranksieve
