#pragma once

#include <vector>

#include "ranksieve/model.hpp"
#include "ranksieve/ssn.hpp"

namespace ranksieve {

/// Iterate of the augmented Lagrangian method on
///   min h(u) + lambda ||z||_1 + ||x - x_anchor||^2 / (2 sigma)  s.t.  u = b - Ax,  z = x.
/// Carried between ALM calls and across PPA iterations as a warm start; rho
/// restarts at rho0 on every call.
struct AlmState {
  Vector x;       // |I|
  Vector u;       // n
  Vector z;       // |I|
  Vector alpha1;  // n, multiplier of u = b - Ax
  Vector alpha2;  // |I|, multiplier of z = x
  double rho = 1.0;
  std::int64_t j = 0;
};

/// Fresh state at x: u = b - Ax, z = x, alpha1 a loss subgradient at u and
/// alpha2 = clamp(A^T alpha1, -lambda, lambda).
AlmState make_alm_state(const ProblemData& data, const Vector& x, double rho0);

/// Stopping budget handed down by the proximal point layer: the ALM stops once
/// dist(0, S_k) <= max(min(gamma / sigma, (delta / sigma) ||x - x_anchor||), floor).
struct AlmTolerances {
  double gamma = 1.0;
  double delta = 1.0;
  double floor = 0.0;
};

struct AlmStats {
  int iterations = 0;
  int ssn_iterations = 0;
  int cg_iterations = 0;
  int line_search_steps = 0;
  double ssn_seconds = 0;
  std::vector<double> sk_distance;       // after each multiplier update
  std::vector<double> primal_residual;   // ||(u - b + Ax, z - x)||
  std::vector<double> lagrangian;        // L_rho(x^{j+1}, u^{j+1}, z^{j+1}; alpha^j)
  std::vector<double> rho;               // penalty used at each iteration
};

struct AlmResult {
  AlmState state;
  AlmStats stats;
  bool converged = false;
};

/// dist(0, S_k) evaluated at the sparse iterate z: exact in the x-block, the
/// natural residual ||u - Prox_h(u + alpha1)|| in the u-block (zero right after
/// a multiplier update) and ||u - b + Az|| for the constraint.
double surrogate_Sk_distance(const ProblemData& data, const AlmState& state,
                             const Vector& x_anchor, double sigma);

AlmResult alm_solve(const ProblemData& data, const Vector& x_anchor, double sigma, AlmState state,
                    const AlmTolerances& tol, const SolverConfig& config);

}  // namespace ranksieve
