#include "ranksieve/alm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "ranksieve/errors.hpp"
#include "ranksieve/prox.hpp"

namespace ranksieve {

AlmState make_alm_state(const ProblemData& data, const Vector& x, double rho0) {
  if (x.size() != data.p()) throw std::invalid_argument("make_alm_state: dimension mismatch");
  AlmState s;
  s.x = x;
  s.z = x;
  s.u = data.b() - data.A() * x;
  s.alpha1 = loss_subgradient(data.loss(), s.u);
  s.alpha2 = (data.A().transpose() * s.alpha1).cwiseMax(-data.lambda()).cwiseMin(data.lambda());
  s.rho = rho0;
  return s;
}

double surrogate_Sk_distance(const ProblemData& data, const AlmState& state,
                             const Vector& x_anchor, double sigma) {
  const double lambda = data.lambda();
  const Vector& z = state.z;
  const Vector Az = data.A() * z;
  // x-block: min over t in lambda d||z||_1 of ||-A^T alpha1 + t + (z - x_anchor)/sigma||
  const Vector c = -(data.A().transpose() * state.alpha1) + (z - x_anchor) / sigma;
  double sx = 0;
  for (Index i = 0; i < c.size(); ++i) {
    double r;
    if (z[i] > 0)
      r = c[i] + lambda;
    else if (z[i] < 0)
      r = c[i] - lambda;
    else
      r = std::max(std::abs(c[i]) - lambda, 0.0);
    sx += r * r;
  }
  const Vector pu = loss_prox(data.loss(), state.u + state.alpha1, 1.0).point;
  const double su = (state.u - pu).squaredNorm();
  const double sc = (state.u - data.b() + Az).squaredNorm();
  return std::sqrt(sx + su + sc);
}

AlmResult alm_solve(const ProblemData& data, const Vector& x_anchor, double sigma, AlmState state,
                    const AlmTolerances& tol, const SolverConfig& config) {
  const Index n = data.n();
  const Index p = data.p();
  if (state.x.size() != p || state.alpha2.size() != p || state.alpha1.size() != n ||
      x_anchor.size() != p)
    throw std::invalid_argument("alm_solve: state does not match the problem dimensions");
  if (!(sigma > 0) || !(state.rho > 0))
    throw std::invalid_argument("alm_solve: sigma and rho must be positive");

  AlmResult out;
  AlmStats& st = out.stats;
  // every subproblem starts from rho0; a penalty inherited from the previous
  // subproblem is usually far too large once the anchor moves
  state.rho = config.rho0;
  const double ratio = config.summable_ratio;
  double weight = ratio;  // eps_j = kappa_j = kappa'_j = ratio^(j+1)

  auto stop_threshold = [&](const Vector& x) {
    const double a = tol.gamma / sigma;
    const double b = tol.delta / sigma * (x - x_anchor).norm();
    return std::max(std::min(a, b), tol.floor);
  };

  for (int j = 0; j < config.max_alm_iter; ++j, weight *= ratio) {
    const double rho = state.rho;
    const SsnContext ctx{data.A(), data.b(), data.lambda(), data.loss(), rho, sigma,
                         state.alpha1, state.alpha2, x_anchor};

    SsnOptions opts;
    opts.tol = config.eps_ssn;
    opts.tol_floor = std::max(config.ssn_tol_floor, 0.01 * tol.floor);
    opts.max_iter = config.max_ssn_iter;
    opts.armijo_mu = config.armijo_mu;
    opts.armijo_delta = config.armijo_delta;
    opts.max_line_search = config.max_line_search;
    opts.eta_bar0 = config.eta_bar0;
    opts.eta_bar1 = config.eta_bar1;
    opts.cg_max_iter = config.cg_max_iter;
    // (C'), (D1'), (D2') right-hand sides, plus half the current ALM stop level
    // so a single multiplier update can already meet it.
    opts.dynamic_tol = [&, rho, weight](const GradientEval& e) {
      const double dalpha = std::sqrt((rho * (e.f1 - e.prox1.point) - state.alpha1).squaredNorm() +
                                      (rho * (e.f2 - e.p2) - state.alpha2).squaredNorm());
      const double c_rule = weight / std::sqrt(rho);
      const double d1_rule = weight / std::sqrt(rho) * dalpha;
      const double d2_rule = weight / rho * dalpha;
      return std::min({c_rule, d1_rule, d2_rule, 0.5 * stop_threshold(e.p2)});
    };

    const auto t0 = std::chrono::steady_clock::now();
    SsnResult ssn = ssn_minimize(ctx, state.x, opts);
    st.ssn_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    st.ssn_iterations += ssn.stats.iterations;
    st.cg_iterations += ssn.stats.cg_iterations;
    st.line_search_steps += ssn.stats.line_search_steps;

    GradientEval& e = ssn.at;
    st.lagrangian.push_back(e.value - (state.alpha1.squaredNorm() + state.alpha2.squaredNorm()) /
                                          (2.0 * rho));
    st.rho.push_back(rho);

    state.x = std::move(e.x);
    state.u = std::move(e.prox1.point);
    state.z = std::move(e.p2);
    const Vector primal1 = state.u - data.b() + e.Ax;
    const Vector primal2 = state.z - state.x;
    state.alpha1 -= rho * primal1;
    state.alpha2 -= rho * primal2;
    ++state.j;
    ++st.iterations;

    const double primal = std::sqrt(primal1.squaredNorm() + primal2.squaredNorm());
    const double sk = surrogate_Sk_distance(data, state, x_anchor, sigma);
    st.primal_residual.push_back(primal);
    st.sk_distance.push_back(sk);
    if (!std::isfinite(sk)) throw NumericFailure("alm_solve: non-finite residual");

    if (sk <= stop_threshold(state.z)) {
      out.converged = true;
      break;
    }
    state.rho = std::min(rho * config.rho_factor, config.rho_max);
  }
  out.state = std::move(state);
  if (!out.converged)
    throw NonConvergence("alm_solve: iteration cap reached", out.state.x,
                         st.sk_distance.empty() ? INFINITY : st.sk_distance.back());
  return out;
}

}  // namespace ranksieve
