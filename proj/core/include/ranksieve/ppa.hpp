#pragma once

#include <vector>

#include "ranksieve/alm.hpp"
#include "ranksieve/model.hpp"

namespace ranksieve {

/// Proximal point iterate: x^k, sigma_k and the ALM state used to warm start
/// the next subproblem.
struct PpaState {
  AlmState alm;
  double sigma = 1.0;
  std::int64_t k = 0;

  const Vector& x() const noexcept { return alm.z; }
};

PpaState make_ppa_state(const ProblemData& data, const Vector& x, const SolverConfig& config);

struct PpaStats {
  int iterations = 0;
  int alm_iterations = 0;
  int ssn_iterations = 0;
  int cg_iterations = 0;
  int line_search_steps = 0;
  double ssn_seconds = 0;
  std::vector<double> objective;   // objective(x^k) before every step, then at exit
  std::vector<double> step_norm;   // ||x^{k+1} - x^k||
  std::vector<double> kkt;         // restricted ||Res|| before every step, then at exit
  std::vector<double> sigma;
};

struct PpaResult {
  PpaState state;
  PpaStats stats;
  double res = 0;      // restricted ||Res|| at exit
  double eta_kkt = 0;
};

/// Runs the proximal point loop on `data` (already restricted to the sieve
/// support) until the KKT residual with u = b - Ax drops to `target_tol`.
/// Throws NonConvergence carrying the last iterate at max_ppa_iter.
PpaResult ppa_solve(const ProblemData& data, PpaState state, double target_tol,
                    const SolverConfig& config);

}  // namespace ranksieve
