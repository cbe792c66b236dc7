#pragma once

#include <functional>
#include <span>

#include "ranksieve/model.hpp"

namespace ranksieve {

struct KktResidual {
  double res = 0;      // ||Res(x, u, alpha)||
  double eta = 0;      // relative residual, max of the normalized blocks
  double x_block = 0;  // ||x - Prox_{lambda||.||_1}(x + A^T alpha)||
  double u_block = 0;  // ||u - Prox_h(u + alpha)||
  double c_block = 0;  // ||u - b + Ax||
};

KktResidual kkt_residual(const ProblemData& data, const Vector& x, const Vector& u,
                         const Vector& alpha);

/// Indices of the m largest |A^T s| where s is a loss subgradient at u = b.
IndexSet initial_support(const ProblemData& data, Index m);

struct SieveState {
  IndexSet support;  // sorted
  Vector x;          // p-vector, zero off support
  Vector u;
  Vector alpha;
  double res = 0;
  std::int64_t round = 0;
  double stall = 1;  // multiplier on m_add
  std::vector<Index> support_history;
  std::vector<double> res_history;
};

/// Off-support indices whose KKT violation exceeds lambda + q, ranked by
/// violation (ties by index) and truncated to min(m_add * stall, m_cap).
IndexSet expand_support(const ProblemData& data, const SieveState& state, double q, Index m_add,
                        Index m_cap);

/// Called once per finished round.
using SieveObserver = std::function<void(const SieveTraceRecord&)>;

struct SieveOptions {
  bool full_space = false;  // start from I = {0..p-1}
  SieveObserver observer;
};

SolveReport as_solve(const ProblemData& data, const SolverConfig& config,
                     const SieveOptions& options = {});

}  // namespace ranksieve
