#pragma once

#include <vector>

#include "ranksieve/model.hpp"

namespace ranksieve {

/// ADMM on  min h(u) + lambda ||z||_1  s.t.  Ax + u = b,  x = z.
struct SplittingOptions {
  double tol = 1e-8;        // on both primal and dual residual norms
  int max_iter = 200000;
  double beta = 1.0;
  int balance_every = 100;  // residual balancing period, 0 disables; at most 20 changes
  int trace_every = 0;      // record objective(z) every k iterations, 0 disables
};

struct SplittingResult {
  Vector x;      // z iterate (exactly sparse)
  Vector u;
  Vector alpha;  // multiplier in dh(u) convention
  double val = 0;
  double primal_residual = 0;
  double dual_residual = 0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> objective_trace;
};

SplittingResult splitting_solve(const ProblemData& data, const SplittingOptions& options);
SplittingResult splitting_solve(const ProblemData& data, double tol, int max_iter);

/// Projection onto {v_1 >= ... >= v_n} by trying every contiguous partition. n <= 10.
Vector enumerate_isotonic_projection(const Vector& v);

/// Prox_{tau h} for the Wilcoxon loss through the exhaustive projection. n <= 10.
Vector enumerate_prox_oracle(const Vector& y, double tau);

}  // namespace ranksieve
