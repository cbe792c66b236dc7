#include "ranksieve/ssn.hpp"

#include <algorithm>
#include <stdexcept>

namespace ranksieve {

namespace {

// h evaluated at the prox point. For the Wilcoxon loss the sorted projection
// is already nonincreasing, so the pairwise sum is linear in the pool values.
double loss_at_prox(Loss loss, const LossProx& prox) {
  if (loss != Loss::WilcoxonRank) return loss_value(loss, prox.point);
  const auto& dec = std::get<PoolDecomposition>(prox.jacobian);
  const double n = static_cast<double>(dec.size());
  double acc = 0;
  for (const Pool& pool : dec.pools) {
    const double s = static_cast<double>(pool.size);
    const double first = static_cast<double>(pool.begin);
    // sum over k in pool of (n - 2k - 1)
    const double weight = s * (n - 1.0) - 2.0 * (first * s + 0.5 * s * (s - 1.0));
    acc += weight * pool.value;
  }
  return 2.0 * acc / (n * (n - 1.0));
}

void check_dims(const SsnContext& ctx, const Vector& x) {
  if (x.size() != ctx.A.cols() || ctx.alpha2.size() != ctx.A.cols() ||
      ctx.x_anchor.size() != ctx.A.cols() || ctx.alpha1.size() != ctx.A.rows() ||
      ctx.b.size() != ctx.A.rows())
    throw std::invalid_argument("ssn: inconsistent dimensions");
  if (!(ctx.rho > 0) || !(ctx.sigma > 0))
    throw std::invalid_argument("ssn: rho and sigma must be positive");
}

void add_gradient(const SsnContext& ctx, GradientEval& e) {
  e.mask = l1_jacobian(e.f2, ctx.lambda / ctx.rho);
  e.grad = -ctx.rho * (ctx.A.transpose() * (e.f1 - e.prox1.point)) + ctx.rho * (e.f2 - e.p2) +
           (e.x - ctx.x_anchor) / ctx.sigma;
}

GradientEval evaluate(const SsnContext& ctx, Vector x, Vector Ax, bool with_gradient) {
  GradientEval e;
  const double inv_rho = 1.0 / ctx.rho;
  e.f1 = ctx.b - Ax + inv_rho * ctx.alpha1;
  e.prox1 = loss_prox(ctx.loss, e.f1, inv_rho);
  e.f2 = x + inv_rho * ctx.alpha2;
  const double l1_tau = ctx.lambda * inv_rho;
  e.p2 = soft_threshold(e.f2, l1_tau);

  const double g1 = loss_at_prox(ctx.loss, e.prox1) +
                    0.5 * ctx.rho * (e.prox1.point - e.f1).squaredNorm();
  const double g2 = ctx.lambda * e.p2.lpNorm<1>() + 0.5 * ctx.rho * (e.p2 - e.f2).squaredNorm();
  const double g3 = (x - ctx.x_anchor).squaredNorm() / (2.0 * ctx.sigma);
  e.value = g1 + g2 + g3;

  e.x = std::move(x);
  e.Ax = std::move(Ax);
  if (with_gradient) add_gradient(ctx, e);
  return e;
}

}  // namespace

double eval_phi(const SsnContext& ctx, const Vector& x) {
  check_dims(ctx, x);
  return evaluate(ctx, x, ctx.A * x, false).value;
}

GradientEval eval_grad_phi(const SsnContext& ctx, const Vector& x) {
  check_dims(ctx, x);
  return evaluate(ctx, x, ctx.A * x, true);
}

HessianAction::HessianAction(const SsnContext& ctx, const GradientEval& at)
    : HessianAction(ctx.A, at.prox1, at.mask, ctx.rho, ctx.sigma) {}

HessianAction::HessianAction(const Matrix& A, LossProx prox1, L1JacobianMask mask, double rho,
                             double sigma)
    : A_(&A), prox1_(std::move(prox1)), mask_(std::move(mask)), rho_(rho), sigma_(sigma) {
  if (mask_.diag.size() != A.cols() || prox1_.point.size() != A.rows())
    throw std::invalid_argument("HessianAction: inconsistent dimensions");
}

Vector HessianAction::apply(const Vector& d) const {
  if (d.size() != A_->cols()) throw std::invalid_argument("hessian_apply: dimension mismatch");
  const Vector Ad = (*A_) * d;
  const Vector complement = Ad - apply_jacobian(prox1_, Ad);
  Vector out = A_->transpose() * complement;
  out += d - mask_.diag.cwiseProduct(d);
  out *= rho_;
  out += d / sigma_;
  return out;
}

SsnResult ssn_minimize(const SsnContext& ctx, const Vector& x_init, const SsnOptions& opts) {
  check_dims(ctx, x_init);
  SsnResult res;
  res.at = evaluate(ctx, x_init, ctx.A * x_init, true);
  SsnStats& st = res.stats;

  for (int it = 0;; ++it) {
    GradientEval& cur = res.at;
    const double gnorm = cur.grad.norm();
    if (!std::isfinite(gnorm) || !std::isfinite(cur.value))
      throw NumericFailure("ssn_minimize: non-finite gradient or objective");
    st.grad_norms.push_back(gnorm);
    st.phi_values.push_back(cur.value);

    double tol = opts.tol;
    if (opts.dynamic_tol) tol = std::min(tol, opts.dynamic_tol(cur));
    tol = std::max(tol, opts.tol_floor);
    if (gnorm <= tol) return res;
    if (it >= opts.max_iter)
      throw NonConvergence("ssn_minimize: iteration cap reached", cur.x, gnorm);

    const HessianAction hess(ctx, cur);
    const double eta = std::min(opts.eta_bar0, opts.eta_bar1 * gnorm);
    CgResult cg = cg_solve(hess, cur.grad, eta, opts.cg_max_iter);
    st.cg_iterations += cg.iterations;
    if (cg.degraded) ++st.degraded_cg;
    Vector d = std::move(cg.d);
    double slope = cur.grad.dot(d);
    if (!(slope < 0)) {
      d = -cur.grad;
      slope = -gnorm * gnorm;
    }

    const Vector Ad = ctx.A * d;
    // Slack for rounding in phi once the predicted decrease is below machine
    // resolution; without it the last Newton steps would be rejected.
    const double slack = 1e-14 * std::max(1.0, std::abs(cur.value));
    double step = 1.0;
    bool accepted = false;
    GradientEval trial;
    for (int ls = 0; ls <= opts.max_line_search; ++ls) {
      trial = evaluate(ctx, cur.x + step * d, cur.Ax + step * Ad, false);
      if (trial.value <= cur.value + opts.armijo_mu * step * slope + slack) {
        accepted = true;
        break;
      }
      step *= opts.armijo_delta;
      ++st.line_search_steps;
    }
    if (!accepted)
      throw Stagnation("ssn_minimize: line search failed", cur.x, gnorm);
    st.step_sizes.push_back(step);
    ++st.iterations;
    add_gradient(ctx, trial);
    res.at = std::move(trial);
  }
}

}  // namespace ranksieve
