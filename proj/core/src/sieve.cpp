#include "ranksieve/sieve.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ranksieve/errors.hpp"
#include "ranksieve/ppa.hpp"
#include "ranksieve/prox.hpp"
#include "ranksieve/refsolver.hpp"

namespace ranksieve {

KktResidual kkt_residual(const ProblemData& data, const Vector& x, const Vector& u,
                         const Vector& alpha) {
  if (x.size() != data.p() || u.size() != data.n() || alpha.size() != data.n())
    throw std::invalid_argument("kkt_residual: dimension mismatch");
  KktResidual r;
  const Vector Ax = data.A() * x;
  r.x_block = (x - soft_threshold(x + data.A().transpose() * alpha, data.lambda())).norm();
  r.u_block = (u - loss_prox(data.loss(), u + alpha, 1.0).point).norm();
  r.c_block = (u - data.b() + Ax).norm();
  r.res = std::sqrt(r.x_block * r.x_block + r.u_block * r.u_block + r.c_block * r.c_block);
  const double nu = 1.0 + u.norm();
  r.eta = std::max({r.u_block / nu, r.x_block / (1.0 + x.norm()), r.c_block / nu});
  return r;
}

namespace {

// Indices of the k largest scores, ties by lower index, returned ascending.
IndexSet top_k(const std::vector<std::pair<double, Index>>& scored, Index k) {
  std::vector<std::pair<double, Index>> v = scored;
  k = std::min<Index>(k, static_cast<Index>(v.size()));
  auto better = [](const auto& a, const auto& b) {
    return a.first > b.first || (a.first == b.first && a.second < b.second);
  };
  std::partial_sort(v.begin(), v.begin() + k, v.end(), better);
  IndexSet out;
  out.reserve(static_cast<size_t>(k));
  for (Index i = 0; i < k; ++i) out.push_back(v[static_cast<size_t>(i)].second);
  std::sort(out.begin(), out.end());
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Vector scatter(const IndexSet& support, const Vector& xs, Index p) {
  Vector x = Vector::Zero(p);
  for (size_t i = 0; i < support.size(); ++i) x[support[i]] = xs[static_cast<Index>(i)];
  return x;
}

// Extends a restricted PPA state to a larger support: existing coordinates
// keep their values, new ones start at zero.
PpaState grow_state(const ProblemData& data, const PpaState& old, const IndexSet& old_support,
                    const IndexSet& new_support, const SolverConfig& config) {
  PpaState s;
  s.sigma = config.sigma0;
  s.k = 0;
  const Index m = static_cast<Index>(new_support.size());
  AlmState& a = s.alm;
  a.x = Vector::Zero(m);
  a.z = Vector::Zero(m);
  a.alpha2 = Vector::Zero(m);
  a.alpha1 = old.alm.alpha1;
  a.rho = old.alm.rho;
  size_t k = 0;
  for (Index i = 0; i < m; ++i) {
    const Index col = new_support[static_cast<size_t>(i)];
    if (k < old_support.size() && old_support[k] == col) {
      a.x[i] = old.alm.x[static_cast<Index>(k)];
      a.z[i] = old.alm.z[static_cast<Index>(k)];
      a.alpha2[i] = old.alm.alpha2[static_cast<Index>(k)];
      ++k;
    } else {
      const double g = data.A().col(col).dot(a.alpha1);
      a.alpha2[i] = std::clamp(g, -data.lambda(), data.lambda());
    }
  }
  a.u = old.alm.u;
  return s;
}

void add_counts(IterationCounts& c, const PpaStats& st) {
  c.ppa += st.iterations;
  c.alm += st.alm_iterations;
  c.ssn += st.ssn_iterations;
  c.cg += st.cg_iterations;
  c.line_search += st.line_search_steps;
}

}  // namespace

IndexSet initial_support(const ProblemData& data, Index m) {
  const Index p = data.p();
  if (m < 1 || m > p) throw std::invalid_argument("initial_support: need 1 <= m <= p");
  const Vector s = loss_subgradient(data.loss(), data.b());
  const Vector score = (data.A().transpose() * s).cwiseAbs();
  std::vector<std::pair<double, Index>> scored(static_cast<size_t>(p));
  for (Index j = 0; j < p; ++j) scored[static_cast<size_t>(j)] = {score[j], j};
  return top_k(scored, m);
}

IndexSet expand_support(const ProblemData& data, const SieveState& state, double q, Index m_add,
                        Index m_cap) {
  const Index p = data.p();
  const Vector g = data.A().transpose() * state.alpha;
  std::vector<char> in(static_cast<size_t>(p), 0);
  for (Index j : state.support) in[static_cast<size_t>(j)] = 1;
  std::vector<std::pair<double, Index>> viol;
  for (Index j = 0; j < p; ++j) {
    if (in[static_cast<size_t>(j)]) continue;
    const double v = std::abs(g[j]) - data.lambda() - q;
    if (v > 0) viol.emplace_back(v, j);
  }
  const double want = std::floor(static_cast<double>(m_add) * state.stall);
  const Index k = std::min<Index>(static_cast<Index>(std::min<double>(want, 1e18)), m_cap);
  return top_k(viol, std::max<Index>(k, 1));
}

SolveReport as_solve(const ProblemData& data, const SolverConfig& config,
                     const SieveOptions& options) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const Index p = data.p();
  const Index m_add = config.resolved_m_add(p);
  const Index m_cap = config.resolved_m_cap(p);

  SolveReport rep;
  SieveState st;
  if (options.full_space) {
    st.support.resize(static_cast<size_t>(p));
    std::iota(st.support.begin(), st.support.end(), Index{0});
  } else if (config.init_presolve_iters > 0) {
    SplittingOptions so;
    so.max_iter = static_cast<int>(config.init_presolve_iters);
    so.tol = config.eps_tilde;
    const Vector xs = splitting_solve(data, so).x;
    for (Index j = 0; j < p; ++j)
      if (xs[j] != 0) st.support.push_back(j);
    if (st.support.empty()) st.support = initial_support(data, m_add);
  } else {
    st.support = initial_support(data, m_add);
  }

  ProblemData sub = data.restrict_to(st.support);
  PpaState warm = make_ppa_state(sub, Vector::Zero(sub.p()), config);
  double prev_res = INFINITY;
  bool done = false;

  auto fallback = [&]() {
    rep.used_fallback = true;
    PpaState full = make_ppa_state(data, st.x, config);
    full.alm.alpha1 = st.alpha;
    PpaResult r = ppa_solve(data, std::move(full), config.eps, config);
    add_counts(rep.iters, r.stats);
    rep.wall_time_ssn += r.stats.ssn_seconds;
    st.x = r.state.alm.z;
    st.alpha = r.state.alm.alpha1;
    st.support.resize(static_cast<size_t>(p));
    std::iota(st.support.begin(), st.support.end(), Index{0});
  };

  try {
    for (std::int64_t round = 0; round < config.max_as_rounds; ++round) {
      PpaResult r = ppa_solve(sub, std::move(warm), config.eps_tilde, config);
      warm = std::move(r.state);
      add_counts(rep.iters, r.stats);
      rep.wall_time_ssn += r.stats.ssn_seconds;
      ++rep.iters.as;

      st.x = scatter(st.support, warm.alm.z, p);
      st.u = data.b() - data.A() * st.x;
      st.alpha = warm.alm.alpha1;
      const KktResidual kkt = kkt_residual(data, st.x, st.u, st.alpha);
      st.res = kkt.res;
      st.round = round;
      st.support_history.push_back(static_cast<Index>(st.support.size()));
      st.res_history.push_back(kkt.res);

      SieveTraceRecord rec{round, static_cast<Index>(st.support.size()), kkt.res, kkt.eta,
                           objective(data, st.x), rep.wall_time_ssn, 0};
      if (kkt.res <= config.eps) {
        rep.trace.push_back(rec);
        if (options.observer) options.observer(rec);
        done = true;
        break;
      }
      const Index outside = p - static_cast<Index>(st.support.size());
      if (outside == 0) {
        rep.trace.push_back(rec);
        if (options.observer) options.observer(rec);
        break;
      }
      if (kkt.res > 0.9 * prev_res) st.stall *= 2;
      prev_res = kkt.res;
      const double q = (config.eps - config.eps_tilde) / std::sqrt(static_cast<double>(outside));
      const IndexSet J = expand_support(data, st, q, m_add, m_cap);
      rec.added = static_cast<Index>(J.size());
      rep.trace.push_back(rec);
      if (options.observer) options.observer(rec);
      if (J.empty()) {
        ++rep.empty_expansions;
        break;
      }
      IndexSet merged;
      merged.reserve(st.support.size() + J.size());
      std::merge(st.support.begin(), st.support.end(), J.begin(), J.end(),
                 std::back_inserter(merged));
      warm = grow_state(data, warm, st.support, merged, config);
      st.support = std::move(merged);
      sub = data.restrict_to(st.support);
    }
  } catch (const NonConvergence&) {
    if (st.x.size() != p) {
      st.x = Vector::Zero(p);
      st.alpha = loss_subgradient(data.loss(), data.b());
    }
  }
  if (!done) fallback();

  rep.x = st.x;
  rep.u = data.b() - data.A() * rep.x;
  rep.alpha = st.alpha;
  rep.val = objective(data, rep.x);
  const KktResidual kkt = kkt_residual(data, rep.x, rep.u, rep.alpha);
  rep.res = kkt.res;
  rep.eta_kkt = kkt.eta;
  rep.converged = kkt.res <= config.eps;
  rep.support = st.support;
  rep.wall_time_total = seconds_since(t0);
  return rep;
}

}  // namespace ranksieve
