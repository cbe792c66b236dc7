#include "ranksieve/ppa.hpp"

#include <cmath>
#include <stdexcept>

#include "ranksieve/errors.hpp"
#include "ranksieve/sieve.hpp"

namespace ranksieve {

PpaState make_ppa_state(const ProblemData& data, const Vector& x, const SolverConfig& config) {
  PpaState s;
  s.alm = make_alm_state(data, x, config.rho0);
  s.sigma = config.sigma0;
  return s;
}

namespace {

KktResidual restricted_kkt(const ProblemData& data, const AlmState& s) {
  const Vector u = data.b() - data.A() * s.z;
  return kkt_residual(data, s.z, u, s.alpha1);
}

}  // namespace

PpaResult ppa_solve(const ProblemData& data, PpaState state, double target_tol,
                    const SolverConfig& config) {
  if (!(target_tol > 0)) throw std::invalid_argument("ppa_solve: target tolerance must be positive");
  if (state.alm.x.size() != data.p() || state.alm.alpha1.size() != data.n())
    throw std::invalid_argument("ppa_solve: state does not match the problem");

  PpaResult out;
  PpaStats& st = out.stats;
  double weight = std::pow(config.summable_ratio, static_cast<double>(state.k + 1));

  KktResidual kkt = restricted_kkt(data, state.alm);
  for (int it = 0;; ++it) {
    st.kkt.push_back(kkt.res);
    st.objective.push_back(objective(data, state.alm.z));
    if (kkt.res <= target_tol) break;
    if (it >= config.max_ppa_iter)
      throw NonConvergence("ppa_solve: iteration cap reached", state.alm.z, kkt.res);

    st.sigma.push_back(state.sigma);
    const Vector anchor = state.alm.z;
    AlmTolerances tol{weight, weight, 0.5 * target_tol};
    AlmResult r = alm_solve(data, anchor, state.sigma, std::move(state.alm), tol, config);
    state.alm = std::move(r.state);
    st.alm_iterations += r.stats.iterations;
    st.ssn_iterations += r.stats.ssn_iterations;
    st.cg_iterations += r.stats.cg_iterations;
    st.line_search_steps += r.stats.line_search_steps;
    st.ssn_seconds += r.stats.ssn_seconds;
    st.step_norm.push_back((state.alm.z - anchor).norm());
    ++st.iterations;
    ++state.k;
    weight *= config.summable_ratio;
    state.sigma = std::min(state.sigma * config.sigma_factor, config.sigma_max);
    kkt = restricted_kkt(data, state.alm);
  }
  out.res = kkt.res;
  out.eta_kkt = kkt.eta;
  out.state = std::move(state);
  return out;
}

}  // namespace ranksieve
