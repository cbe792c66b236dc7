// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: acceptance [criterion numbers...]   (default: all)

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "ranksieve/metrics.hpp"
#include "ranksieve/prox.hpp"
#include "ranksieve/refsolver.hpp"
#include "ranksieve/sieve.hpp"
#include "ranksieve/ssn.hpp"
#include "ranksieve/synth.hpp"
#include "ranksieve/tuning.hpp"

using namespace ranksieve;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Bookkeeping shared by criteria that run the full solver.
struct Tally {
  std::int64_t solves = 0;
  std::int64_t violations = 0;
  double max_time_200x1000 = 0;
  int timed_200x1000 = 0;
  bool eta_ok = true;
  double worst_eta = 0;

  SolveReport run(const ProblemData& d, const SolverConfig& c = {}, const SieveOptions& o = {}) {
    SolveReport r = as_solve(d, c, o);
    ++solves;
    violations += r.empty_expansions;
    if (r.converged) {
      worst_eta = std::max(worst_eta, r.eta_kkt);
      if (!(r.eta_kkt <= 1e-6)) eta_ok = false;
    }
    if (d.n() == 200 && d.p() == 1000 && !o.full_space) {
      max_time_200x1000 = std::max(max_time_200x1000, r.wall_time_total);
      ++timed_200x1000;
    }
    return r;
  }
};

Tally tally;

// Wilcoxon prox pools at y, used to decide whether y +- h d shares the structure.
bool same_pools(const PoolDecomposition& a, const PoolDecomposition& b) {
  if (a.perm != b.perm || a.pools.size() != b.pools.size()) return false;
  for (std::size_t k = 0; k < a.pools.size(); ++k)
    if (a.pools[k].size != b.pools[k].size) return false;
  return true;
}

Outcome c1_prox_oracle() {
  std::mt19937_64 g(2024);
  const auto t0 = Clock::now();
  double worst = 0;
  for (int t = 0; t < 10000; ++t) {
    const Index n = 2 + static_cast<Index>(t % 7);
    Vector y = oracle::randn(g, n, oracle::uniform(g, 0.1, 5));
    if (t % 5 == 0) y[0] = y[n - 1];  // exact ties
    const double tau = std::exp(oracle::uniform(g, std::log(1e-3), std::log(1e2)));
    worst = std::max(worst, (prox_wilcoxon(y, tau).first - enumerate_prox_oracle(y, tau)).cwiseAbs().maxCoeff());
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-10 && secs < 30, fmt("max |err| = %.2e over 10^4 draws, %.1f s", worst, secs)};
}

Outcome c2_jacobians() {
  std::mt19937_64 g(7);
  const double h = 1e-7;
  double worst_w = 0, worst_l1 = 0;
  int used_w = 0, used_l1 = 0, tries = 0;
  while ((used_w < 1000 || used_l1 < 1000) && ++tries < 100000) {
    const Index n = 2 + static_cast<Index>(g() % 12);
    const Vector y = oracle::randn(g, n, 2.0);
    const Vector d = oracle::randn(g, n);
    const double tau = std::exp(oracle::uniform(g, std::log(1e-2), std::log(10.0)));
    if (used_w < 1000) {
      const auto [p0, s0] = prox_wilcoxon(y, tau);
      const auto [pp, sp] = prox_wilcoxon(y + h * d, tau);
      const auto [pm, sm] = prox_wilcoxon(y - h * d, tau);
      if (same_pools(s0, sp) && same_pools(s0, sm)) {
        const Vector fd = (pp - pm) / (2 * h);
        const Vector jd = wilcoxon_jacobian_apply(s0, d);
        worst_w = std::max(worst_w, (fd - jd).norm() / std::max(1.0, jd.norm()));
        ++used_w;
      }
    }
    if (used_l1 < 1000) {
      bool stable = true;
      for (Index i = 0; i < n; ++i)
        if (std::abs(std::abs(y[i]) - tau) <= 2 * h * std::abs(d[i])) stable = false;
      if (stable) {
        const Vector fd = (soft_threshold(y + h * d, tau) - soft_threshold(y - h * d, tau)) / (2 * h);
        const Vector jd = l1_jacobian(y, tau).diag.cwiseProduct(d);
        worst_l1 = std::max(worst_l1, (fd - jd).norm() / std::max(1.0, jd.norm()));
        ++used_l1;
      }
    }
  }
  const bool ok = used_w == 1000 && used_l1 == 1000 && worst_w <= 1e-5 && worst_l1 <= 1e-5;
  return {ok, fmt("Wilcoxon rel err %.2e (%d trials), l1 rel err %.2e (%d trials)", worst_w, used_w,
                  worst_l1, used_l1)};
}

Outcome c3_hessian_pd() {
  std::mt19937_64 g(11);
  double worst = INFINITY;
  int active_pools = 0;
  for (int t = 0; t < 1000; ++t) {
    const Index n = 2 + static_cast<Index>(g() % 19), p = 1 + static_cast<Index>(g() % 20);
    const Matrix A = oracle::randm(g, n, p) / std::sqrt(static_cast<double>(n));
    const double tau = std::exp(oracle::uniform(g, std::log(1e-2), std::log(1e2)));
    const LossProx prox = loss_prox(Loss::WilcoxonRank, oracle::randn(g, n), tau);
    for (const Pool& pl : std::get<PoolDecomposition>(prox.jacobian).pools) active_pools += pl.active();
    Vector mask(p);
    for (Index i = 0; i < p; ++i) mask[i] = static_cast<double>(g() % 2);
    const double rho = std::exp(oracle::uniform(g, std::log(1e-2), std::log(10.0)));
    const double sigma = std::exp(oracle::uniform(g, std::log(1e-1), std::log(1e2)));
    const HessianAction H(A, prox, L1JacobianMask{mask}, rho, sigma);
    Vector d = oracle::randn(g, p);
    d /= d.norm();
    worst = std::min(worst, d.dot(H(d)) - (d.squaredNorm() / sigma - 1e-12));
  }
  return {worst >= 0 && active_pools > 0,
          fmt("min of d'Hd - (|d|^2/sigma - 1e-12) = %.3e over 10^3 configurations", worst)};
}

Outcome c4_gradient() {
  std::mt19937_64 g(13);
  double worst = 0;
  for (int t = 0; t < 200; ++t) {
    const Index n = 4 + static_cast<Index>(g() % 10), p = 2 + static_cast<Index>(g() % 8);
    const Matrix A = oracle::randm(g, n, p);
    const Vector b = oracle::randn(g, n);
    const double lambda = oracle::uniform(g, 0.05, 0.5);
    const Vector a1 = oracle::randn(g, n, 0.05);
    const Vector a2 = oracle::randn(g, p, 0.1).cwiseMax(-lambda).cwiseMin(lambda);
    const Vector anchor = oracle::randn(g, p);
    const Loss loss = t % 2 ? Loss::EuclideanNorm : Loss::WilcoxonRank;
    const SsnContext ctx{A, b, lambda, loss, oracle::uniform(g, 0.1, 10), oracle::uniform(g, 0.5, 50),
                         a1, a2, anchor};
    const Vector x = oracle::randn(g, p);
    const Vector grad = eval_grad_phi(ctx, x).grad;
    const Vector fd = oracle::fd_gradient([&](const Vector& z) { return eval_phi(ctx, z); }, x, 1e-6);
    worst = std::max(worst, (grad - fd).norm() / std::max(1.0, grad.norm()));
  }
  return {worst <= 1e-6, fmt("max relative error %.2e at 200 points", worst)};
}

Outcome c6_cross_solver();
Outcome c7_sieve_full();

Outcome c5_nonempty_expansion() {
  // run on its own: make a representative set of solves first
  if (tally.solves == 0) {
    c6_cross_solver();
    c7_sieve_full();
    for (int s = 1; s <= 3; ++s) {
      tally.run(generate(experiment_spec(Experiment::E1, 100, 400, static_cast<std::uint64_t>(s))).data);
      tally.run(generate(experiment_spec(Experiment::E2, 200, 1000, static_cast<std::uint64_t>(s))).data);
      tally.run(generate(experiment_spec(Experiment::E5, 100, 500, static_cast<std::uint64_t>(s))).data);
    }
  }
  return {tally.violations == 0 && tally.solves > 0,
          fmt("%lld violations across %lld sieve solves", static_cast<long long>(tally.violations),
              static_cast<long long>(tally.solves))};
}

ProblemData small_instance(std::mt19937_64& g, Loss loss, std::uint64_t seed) {
  const Index n = 10 + static_cast<Index>(g() % 21), p = 20 + static_cast<Index>(g() % 41);
  Matrix A = oracle::randm(g, n, p);
  Vector x = Vector::Zero(p);
  for (int k = 0; k < 3; ++k) x[static_cast<Index>(g() % p)] = oracle::uniform(g, 1, 3);
  Vector b = A * x + oracle::randn(g, n, 0.5);
  const double lambda = loss == Loss::WilcoxonRank ? rank_lambda(A, LambdaSpec{1.1, 0.1, 1000, seed})
                                                   : sqrt_lasso_lambda(n);
  return ProblemData(std::move(A), std::move(b), lambda, loss);
}

Outcome c6_cross_solver() {
  std::mt19937_64 g(17);
  double worst = 0;
  int support_mismatch = 0, failures = 0;
  for (int t = 0; t < 20; ++t) {
    const ProblemData d = small_instance(g, t % 2 ? Loss::EuclideanNorm : Loss::WilcoxonRank, 100 + t);
    const SolveReport r = tally.run(d);
    const SplittingResult ref = splitting_solve(d, 1e-10, 5000000);
    if (!r.converged || !ref.converged) {
      ++failures;
      continue;
    }
    worst = std::max(worst, std::abs(r.val - ref.val) / std::max(1e-12, std::abs(ref.val)));
    if (nonzero_rule(r.x).indices != nonzero_rule(ref.x).indices) ++support_mismatch;
  }
  return {failures == 0 && worst <= 1e-5 && support_mismatch == 0,
          fmt("max relative objective gap %.2e, %d support mismatches, %d non-converged", worst,
              support_mismatch, failures)};
}

Outcome c7_sieve_full() {
  double worst = 0;
  int failures = 0;
  for (int t = 0; t < 10; ++t) {
    const Index n = 50 + 5 * t, p = 200 + 20 * t;
    const Instance inst = generate(experiment_spec(Experiment::E1, n, p, 500 + t));
    const SolveReport s = tally.run(inst.data);
    const SolveReport f = tally.run(inst.data, {}, SieveOptions{true, {}});
    if (!s.converged || !f.converged) {
      ++failures;
      continue;
    }
    worst = std::max(worst, std::abs(s.val - f.val) / f.val);
  }
  return {failures == 0 && worst <= 1e-5,
          fmt("max relative objective gap %.2e over 10 instances, %d non-converged", worst, failures)};
}

struct Averages {
  double val = 0, l1 = 0, l2 = 0, me = 0, fp = 0, fn = 0, secs = 0, as = 0;
  int ok = 0;
};

Averages replicate(Experiment e, Index n, Index p, int seeds) {
  Averages a;
  const auto t0 = Clock::now();
  for (int s = 1; s <= seeds; ++s) {
    const Instance inst = generate(experiment_spec(e, n, p, static_cast<std::uint64_t>(s)));
    const SolveReport r = tally.run(inst.data);
    if (!r.converged) continue;
    const MetricsReport m =
        evaluate(inst.data, r.x, r.u, r.alpha, inst.x_true, inst.sigma_x);
    a.val += m.val;
    a.l1 += m.l1_err;
    a.l2 += m.l2_err;
    a.me += m.me;
    a.fp += static_cast<double>(m.fp);
    a.fn += static_cast<double>(m.fn);
    a.as += static_cast<double>(r.iters.as);
    ++a.ok;
  }
  if (a.ok > 0) {
    a.val /= a.ok;
    a.l1 /= a.ok;
    a.l2 /= a.ok;
    a.me /= a.ok;
    a.fp /= a.ok;
    a.fn /= a.ok;
    a.as /= a.ok;
  }
  a.secs = seconds_since(t0);
  return a;
}

bool within(double v, double target, double rel) { return std::abs(v - target) <= rel * target; }

Outcome c8_statistics() {
  std::string detail;
  bool ok = true;

  const Averages e1 = replicate(Experiment::E1, 100, 400, 20);
  const bool e1_ok = e1.ok == 20 && within(e1.val, 3.1889, 0.10) && e1.fn == 0 &&
                     within(e1.fp, 8.5, 0.50) && e1.secs < 300;
  ok &= e1_ok;
  detail += fmt("\n      E1 %s: val %.4f (3.1889+-10%%), FP %.2f (8.5+-50%%), FN %.2f (0), %d/20 ok, %.0f s",
                e1_ok ? "pass" : "FAIL", e1.val, e1.fp, e1.fn, e1.ok, e1.secs);

  const Averages e2 = replicate(Experiment::E2, 200, 1000, 20);
  const bool e2_val = within(e2.val, 9.60, 0.05);
  const bool e2_l2 = within(e2.l2, 0.68, 0.15);
  const bool e2_fn = e2.fn <= 0.5;
  const bool e2_ok = e2.ok == 20 && e2_val && e2_l2 && e2_fn && e2.secs < 900;
  ok &= e2_ok;
  detail += fmt("\n      E2 %s: val %.4f (9.60+-5%%: %s), L2 %.3f (0.68+-15%%: %s), FN %.2f (<=0.5: %s), "
                "L1 %.2f, ME %.2f, FP %.1f, It-AS %.1f, %d/20 ok, %.0f s",
                e2_ok ? "pass" : "FAIL", e2.val, e2_val ? "ok" : "no", e2.l2, e2_l2 ? "ok" : "no", e2.fn,
                e2_fn ? "ok" : "no", e2.l1, e2.me, e2.fp, e2.as, e2.ok, e2.secs);

  double worst_frac = 0;
  for (int s = 1; s <= 3; ++s) {
    const Instance inst = generate(experiment_spec(Experiment::E2, 250, 1250, static_cast<std::uint64_t>(s)));
    Index largest = 0;
    SieveOptions so;
    so.observer = [&](const SieveTraceRecord& rec) { largest = std::max(largest, rec.support_size); };
    tally.run(inst.data, {}, so);
    worst_frac = std::max(worst_frac, static_cast<double>(largest) / 1250.0);
  }
  const bool frac_ok = worst_frac <= 0.15;
  ok &= frac_ok;
  detail += fmt("\n      sieve %s: max |I|/p = %.3f on E2 250x1250 (<= 0.15)", frac_ok ? "pass" : "FAIL",
                worst_frac);

  ok &= tally.eta_ok;
  detail += fmt("\n      eta_KKT %s: worst %.2e over all converged runs so far (<= 1e-6)",
                tally.eta_ok ? "pass" : "FAIL", tally.worst_eta);
  return {ok, detail};
}

Outcome c9_sqrt_lasso() {
  double worst = 0, mean_val = 0;
  int failures = 0;
  for (int s = 1; s <= 3; ++s) {
    const Instance inst = generate(experiment_spec(Experiment::E5, 100, 500, static_cast<std::uint64_t>(s)));
    const SolveReport r = tally.run(inst.data);
    const SplittingResult ref = splitting_solve(inst.data, 1e-10, 5000000);
    if (!r.converged || !ref.converged) {
      ++failures;
      continue;
    }
    worst = std::max(worst, std::abs(r.val - ref.val) / ref.val);
    mean_val += r.val / 3;
  }
  const double lam = sqrt_lasso_lambda(1);
  const bool ok = failures == 0 && worst <= 1e-6 && std::abs(lam - 2.155960) <= 1e-5;
  return {ok, fmt("max relative gap to splitting %.2e on E5 100x500 (mean val %.4f), "
                  "sqrt_lasso_lambda(1) = %.7f",
                  worst, mean_val, lam)};
}

Outcome c10_timing() {
  if (tally.timed_200x1000 == 0) {
    const Instance inst = generate(experiment_spec(Experiment::E2, 200, 1000, 1));
    tally.run(inst.data);
  }
  return {tally.max_time_200x1000 < 60,
          fmt("slowest as_solve at n=200, p=1000: %.2f s over %d runs (< 60 s)", tally.max_time_200x1000,
              tally.timed_200x1000)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"prox oracle equivalence", c1_prox_oracle},
      {"Jacobian correctness", c2_jacobians},
      {"generalized Hessian positive definiteness", c3_hessian_pd},
      {"gradient check", c4_gradient},
      {"nonempty expansion set whenever Res > eps", c5_nonempty_expansion},
      {"cross-solver equivalence", c6_cross_solver},
      {"sieve / full-space equivalence", c7_sieve_full},
      {"desk-scale statistical reproduction", c8_statistics},
      {"square-root lasso", c9_sqrt_lasso},
      {"soft performance check", c10_timing},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  // criterion 5 summarizes the solves made by 6-9, so it is reported last
  std::vector<int> order{1, 2, 3, 4, 6, 7, 8, 9, 10, 5};
  int failed = 0;
  for (int k : order) {
    if (!wanted.empty() && !wanted.count(k)) continue;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[static_cast<std::size_t>(k - 1)].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("[%s] %2d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", k,
                criteria[static_cast<std::size_t>(k - 1)].first, o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
