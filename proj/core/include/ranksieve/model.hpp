#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ranksieve {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;
using IndexSet = std::vector<Index>;

/// Nonsmooth loss h applied to the residual u = b - Ax.
enum class Loss {
  WilcoxonRank,   // h(u) = 2/(n(n-1)) sum_{i<j} |u_i - u_j|
  EuclideanNorm,  // h(u) = ||u||_2 (square-root lasso)
};

std::string_view to_string(Loss loss);
Loss parse_loss(std::string_view name);  // "rank" | "sqrt" (and long names)

/// One instance of  min_x h(b - Ax) + lambda ||x||_1.
///
/// Immutable once built; the constructor checks dimensions, finiteness and
/// lambda > 0. A is stored column-major so column gathers stay cheap.
class ProblemData {
 public:
  ProblemData(Matrix A, Vector b, double lambda, Loss loss);

  const Matrix& A() const noexcept { return A_; }
  const Vector& b() const noexcept { return b_; }
  double lambda() const noexcept { return lambda_; }
  Loss loss() const noexcept { return loss_; }
  Index n() const noexcept { return A_.rows(); }
  Index p() const noexcept { return A_.cols(); }

  /// Same problem with x restricted to the listed columns (in the given order).
  ProblemData restrict_to(std::span<const Index> columns) const;

 private:
  struct Unchecked {};
  ProblemData(Unchecked, Matrix A, Vector b, double lambda, Loss loss);

  Matrix A_;
  Vector b_;
  double lambda_;
  Loss loss_;
};

/// Tolerances, schedules and caps for every solver layer.
struct SolverConfig {
  double eps = 1e-6;         // outer KKT tolerance on ||Res||
  double eps_tilde = 9e-7;   // restricted-subproblem tolerance, < eps
  double eps_ssn = 1e-6;     // SSN gradient tolerance

  Index m_add = 0;           // components added per sieve round; 0 = round(p/100)
  Index m_cap = 0;           // cap per round; 0 = round(p/40)
  Index init_presolve_iters = 0;  // >0: seed the support from splitting iterations

  double sigma0 = 1.0;
  double sigma_factor = 1.5;
  double sigma_max = 1e6;

  double rho0 = 0.01;
  double rho_factor = 2.0;
  double rho_max = 1e8;

  double summable_ratio = 0.8;  // gamma_k = delta_k = eps_j = kappa_j = ratio^(k+1)

  double armijo_mu = 1e-4;
  double armijo_delta = 0.5;
  int max_line_search = 50;

  double eta_bar0 = 0.1;
  double eta_bar1 = 1.0;
  int cg_max_iter = 500;

  double ssn_tol_floor = 1e-11;  // SSN never asked for less than this

  int max_ssn_iter = 200;
  int max_alm_iter = 300;
  int max_ppa_iter = 500;
  int max_as_rounds = 100000;

  /// Throws std::invalid_argument on violated invariants.
  void validate() const;
  Index resolved_m_add(Index p) const;
  Index resolved_m_cap(Index p) const;
};

struct IterationCounts {
  std::int64_t as = 0;
  std::int64_t ppa = 0;
  std::int64_t alm = 0;
  std::int64_t ssn = 0;
  std::int64_t cg = 0;
  std::int64_t line_search = 0;

  IterationCounts& operator+=(const IterationCounts& o) {
    as += o.as;
    ppa += o.ppa;
    alm += o.alm;
    ssn += o.ssn;
    cg += o.cg;
    line_search += o.line_search;
    return *this;
  }
};

/// One adaptive-sieving round as emitted to traces.
struct SieveTraceRecord {
  std::int64_t round = 0;
  Index support_size = 0;
  double res = 0;
  double eta_kkt = 0;
  double val = 0;
  double ssn_seconds = 0;
  Index added = 0;
};

struct SolveReport {
  Vector x;      // p-vector, zero off the final support
  Vector u;      // b - Ax
  Vector alpha;  // multiplier for u = b - Ax
  double val = 0;
  double res = 0;      // absolute ||Res(x,u,alpha)||
  double eta_kkt = 0;  // relative KKT residual
  IterationCounts iters;
  double wall_time_total = 0;
  double wall_time_ssn = 0;
  bool converged = false;
  bool used_fallback = false;
  IndexSet support;  // final sieve index set I^l
  std::vector<SieveTraceRecord> trace;
  std::int64_t empty_expansions = 0;  // rounds with ||Res|| > eps but J empty
};

/// h(b - Ax) + lambda ||x||_1.
double objective(const ProblemData& data, const Vector& x);

}  // namespace ranksieve
