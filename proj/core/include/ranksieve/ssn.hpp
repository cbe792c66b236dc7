#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "ranksieve/errors.hpp"
#include "ranksieve/model.hpp"
#include "ranksieve/prox.hpp"

namespace ranksieve {

/// Data of one ALM inner problem
///   phi(x) = rho M_{h/rho}(f1(x)) + rho M_{(lambda/rho)||.||_1}(f2(x)) + ||x - x_anchor||^2 / (2 sigma)
/// with f1(x) = b - Ax + alpha1/rho and f2(x) = x + alpha2/rho.
/// Non-owning: every referenced object must outlive the context.
struct SsnContext {
  const Matrix& A;  // n x |I|
  const Vector& b;
  double lambda;
  Loss loss;
  double rho;
  double sigma;
  const Vector& alpha1;  // n
  const Vector& alpha2;  // |I|
  const Vector& x_anchor;
};

/// Everything known about phi at one point. Kept so the ALM step can reuse
/// the prox points (u = p1, z = p2) without recomputing them.
struct GradientEval {
  Vector x;
  Vector Ax;
  Vector f1;
  LossProx prox1;  // Prox_{h/rho}(f1) and its Jacobian element
  Vector f2;
  Vector p2;       // Prox_{(lambda/rho)||.||_1}(f2)
  L1JacobianMask mask;
  double value = 0;
  Vector grad;
};

double eval_phi(const SsnContext& ctx, const Vector& x);
GradientEval eval_grad_phi(const SsnContext& ctx, const Vector& x);

/// Matrix-free element of the generalized Hessian
///   H = rho (A^T (I - V1) A + I - V2) + I / sigma.
class HessianAction {
 public:
  HessianAction(const SsnContext& ctx, const GradientEval& at);
  HessianAction(const Matrix& A, LossProx prox1, L1JacobianMask mask, double rho, double sigma);

  Vector apply(const Vector& d) const;
  Vector operator()(const Vector& d) const { return apply(d); }
  Index size() const noexcept { return A_->cols(); }

 private:
  const Matrix* A_;
  LossProx prox1_;
  L1JacobianMask mask_;
  double rho_;
  double sigma_;
};

inline Vector hessian_apply(const HessianAction& h, const Vector& d) { return h.apply(d); }

struct CgResult {
  Vector d;
  int iterations = 0;
  double residual_norm = 0;  // ||H d + g||
  bool degraded = false;     // stopped at max_iter above the requested accuracy
};

/// Conjugate gradients for H d = -g, stopping once ||H d + g|| <= eta ||g||.
/// `op` is any symmetric positive definite action Vector -> Vector.
/// `on_iterate` (optional) sees every iterate, starting with d = 0.
template <class Op>
CgResult cg_solve(const Op& op, const Vector& g, double eta, int max_iter,
                  const std::function<void(const Vector&)>& on_iterate = {}) {
  CgResult out;
  const Index m = g.size();
  out.d = Vector::Zero(m);
  if (on_iterate) on_iterate(out.d);
  Vector r = -g;  // residual of H d = -g at d = 0
  const double target = eta * g.norm();
  double rr = r.squaredNorm();
  out.residual_norm = std::sqrt(rr);
  if (out.residual_norm <= target) return out;
  Vector dir = r;
  for (int it = 0; it < max_iter; ++it) {
    const Vector Hp = op(dir);
    const double curvature = dir.dot(Hp);
    if (!std::isfinite(curvature) || !(curvature > 0))
      throw NumericFailure("cg_solve: non-positive or non-finite curvature");
    const double step = rr / curvature;
    out.d.noalias() += step * dir;
    r.noalias() -= step * Hp;
    const double rr_next = r.squaredNorm();
    out.iterations = it + 1;
    out.residual_norm = std::sqrt(rr_next);
    if (!std::isfinite(out.residual_norm)) throw NumericFailure("cg_solve: non-finite residual");
    if (on_iterate) on_iterate(out.d);
    if (out.residual_norm <= target) return out;
    dir = r + (rr_next / rr) * dir;
    rr = rr_next;
  }
  out.degraded = true;
  return out;
}

struct SsnOptions {
  double tol = 1e-6;
  /// Optional extra bound evaluated at each iterate; the effective tolerance is
  /// max(tol_floor, min(tol, dynamic_tol(eval))).
  std::function<double(const GradientEval&)> dynamic_tol;
  double tol_floor = 1e-11;
  int max_iter = 200;
  double armijo_mu = 1e-4;
  double armijo_delta = 0.5;
  int max_line_search = 50;
  double eta_bar0 = 0.1;
  double eta_bar1 = 1.0;
  int cg_max_iter = 500;
};

struct SsnStats {
  int iterations = 0;
  int cg_iterations = 0;
  int line_search_steps = 0;  // backtracks beyond the unit step
  int degraded_cg = 0;
  std::vector<double> grad_norms;  // at x_0, x_1, ...
  std::vector<double> phi_values;
  std::vector<double> step_sizes;
};

struct SsnResult {
  GradientEval at;  // evaluation at the returned point
  SsnStats stats;
};

SsnResult ssn_minimize(const SsnContext& ctx, const Vector& x_init, const SsnOptions& opts);

}  // namespace ranksieve
