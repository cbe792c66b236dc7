#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace ranksieve {

/// Raised when a computation produces NaN/Inf (e.g. CG breakdown).
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative layer hit its iteration cap. Carries the best iterate found so
/// far and the residual measure that was being driven down.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, Eigen::VectorXd best, double residual)
      : std::runtime_error(what), best_(std::move(best)), residual_(residual) {}

  const Eigen::VectorXd& best_iterate() const noexcept { return best_; }
  double residual() const noexcept { return residual_; }

 private:
  Eigen::VectorXd best_;
  double residual_;
};

/// Armijo backtracking could not find an acceptable step.
class Stagnation : public NonConvergence {
 public:
  using NonConvergence::NonConvergence;
};

}  // namespace ranksieve
