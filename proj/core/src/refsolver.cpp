#include "ranksieve/refsolver.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ranksieve/prox.hpp"

namespace ranksieve {

namespace {

// Solves (A^T A + I) x = r, through the smaller of the two Gram systems.
class NormalSolver {
 public:
  explicit NormalSolver(const Matrix& A) : A_(A), wide_(A.rows() < A.cols()) {
    if (wide_) {
      Matrix G = A * A.transpose();
      G.diagonal().array() += 1.0;
      llt_.compute(G);
    } else {
      Matrix G = A.transpose() * A;
      G.diagonal().array() += 1.0;
      llt_.compute(G);
    }
    if (llt_.info() != Eigen::Success) throw std::runtime_error("splitting_solve: factorization failed");
  }

  Vector solve(const Vector& r) const {
    if (!wide_) return llt_.solve(r);
    // (I + A^T A)^{-1} = I - A^T (I + A A^T)^{-1} A
    return r - A_.transpose() * llt_.solve(A_ * r);
  }

 private:
  const Matrix& A_;
  bool wide_;
  Eigen::LLT<Matrix> llt_;
};

}  // namespace

SplittingResult splitting_solve(const ProblemData& data, double tol, int max_iter) {
  SplittingOptions o;
  o.tol = tol;
  o.max_iter = max_iter;
  return splitting_solve(data, o);
}

SplittingResult splitting_solve(const ProblemData& data, const SplittingOptions& opt) {
  if (!(opt.tol > 0)) throw std::invalid_argument("splitting_solve: tol must be positive");
  if (!(opt.beta > 0)) throw std::invalid_argument("splitting_solve: beta must be positive");
  const Matrix& A = data.A();
  const Vector& b = data.b();
  const Index n = data.n();
  const Index p = data.p();
  const double lambda = data.lambda();

  NormalSolver normal(A);
  double beta = opt.beta;
  Vector x = Vector::Zero(p), z = Vector::Zero(p), u = b;
  Vector y1 = Vector::Zero(n), y2 = Vector::Zero(p);  // scaled duals
  Vector Ax = Vector::Zero(n);

  SplittingResult out;
  double r_norm = INFINITY, s_norm = INFINITY;
  // a penalty that keeps moving can cycle forever; freeze it after a while
  int balance_left = 20;
  int it = 0;
  for (; it < opt.max_iter; ++it) {
    x = normal.solve(A.transpose() * (b - u - y1) + (z - y2));
    Ax.noalias() = A * x;
    const Vector u_old = u;
    const Vector z_old = z;
    u = loss_prox(data.loss(), b - Ax - y1, 1.0 / beta).point;
    z = soft_threshold(x + y2, lambda / beta);
    const Vector r1 = Ax + u - b;
    const Vector r2 = x - z;
    y1 += r1;
    y2 += r2;
    r_norm = std::sqrt(r1.squaredNorm() + r2.squaredNorm());
    s_norm = beta * (A.transpose() * (u - u_old) - (z - z_old)).norm();
    if (opt.trace_every > 0 && it % opt.trace_every == 0)
      out.objective_trace.push_back(objective(data, z));
    if (!std::isfinite(r_norm) || !std::isfinite(s_norm))
      throw std::runtime_error("splitting_solve: non-finite residual");
    if (r_norm <= opt.tol && s_norm <= opt.tol) {
      out.converged = true;
      ++it;
      break;
    }
    if (opt.balance_every > 0 && balance_left > 0 && (it + 1) % opt.balance_every == 0) {
      if (r_norm > 10 * s_norm) {
        beta *= 2;
        y1 /= 2;
        y2 /= 2;
        --balance_left;
      } else if (s_norm > 10 * r_norm) {
        beta /= 2;
        y1 *= 2;
        y2 *= 2;
        --balance_left;
      }
    }
  }
  out.iterations = it;
  out.x = z;
  out.u = u;
  out.alpha = -beta * y1;
  out.val = objective(data, z);
  out.primal_residual = r_norm;
  out.dual_residual = s_norm;
  return out;
}

Vector enumerate_isotonic_projection(const Vector& v) {
  const Index n = v.size();
  if (n > 10) throw std::invalid_argument("enumerate_isotonic_projection: n must be <= 10");
  if (n == 0) return v;
  const double scale = 1.0 + v.cwiseAbs().maxCoeff();
  const double slack = 1e-12 * scale;
  Vector best;
  double best_dist = INFINITY;
  Vector cand(n);
  const unsigned long count = 1ul << (n - 1);
  for (unsigned long mask = 0; mask < count; ++mask) {
    // bit i set: cut between positions i and i+1
    Index start = 0;
    for (Index i = 0; i < n; ++i) {
      const bool cut = i == n - 1 || ((mask >> i) & 1ul);
      if (!cut) continue;
      const double mean = v.segment(start, i - start + 1).mean();
      cand.segment(start, i - start + 1).setConstant(mean);
      start = i + 1;
    }
    bool ok = true;
    for (Index i = 0; i + 1 < n && ok; ++i) ok = cand[i] >= cand[i + 1] - slack;
    double mu = 0;
    for (Index i = 0; i < n && ok; ++i) {
      mu += cand[i] - v[i];
      ok = mu >= -slack * static_cast<double>(n);
    }
    if (!ok) continue;
    const double d = (cand - v).squaredNorm();
    if (d < best_dist) {
      best_dist = d;
      best = cand;
    }
  }
  if (best.size() == 0) throw std::runtime_error("enumerate_isotonic_projection: no candidate passed");
  return best;
}

Vector enumerate_prox_oracle(const Vector& y, double tau) {
  const Index n = y.size();
  if (n < 2 || n > 10) throw std::invalid_argument("enumerate_prox_oracle: need 2 <= n <= 10");
  if (!(tau > 0)) throw std::invalid_argument("enumerate_prox_oracle: tau must be positive");
  std::vector<Index> perm(static_cast<size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::stable_sort(perm.begin(), perm.end(), [&](Index a, Index b) { return y[a] > y[b]; });
  const double c = 2.0 * tau / (static_cast<double>(n) * static_cast<double>(n - 1));
  Vector shifted(n);
  for (Index k = 0; k < n; ++k)
    shifted[k] = y[perm[static_cast<size_t>(k)]] - c * static_cast<double>(n - 2 * k - 1);
  const Vector proj = enumerate_isotonic_projection(shifted);
  Vector out(n);
  for (Index k = 0; k < n; ++k) out[perm[static_cast<size_t>(k)]] = proj[k];
  return out;
}

}  // namespace ranksieve
