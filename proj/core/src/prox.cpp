#include "ranksieve/prox.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ranksieve {

namespace {

void require_positive_tau(double tau, const char* where) {
  if (!(tau > 0)) throw std::invalid_argument(std::string(where) + ": tau must be positive");
}

// Indices sorting y into nonincreasing order; equal entries keep index order.
std::vector<Index> descending_order(const Vector& y) {
  std::vector<Index> perm(static_cast<std::size_t>(y.size()));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::stable_sort(perm.begin(), perm.end(), [&](Index a, Index b) { return y[a] > y[b]; });
  return perm;
}

// PAVA on an already ordered sequence. Pools are merged while the earlier mean
// does not exceed the later one, so the surviving pool values strictly decrease.
std::vector<Pool> pava_nonincreasing(const Vector& v) {
  std::vector<Pool> pools;
  std::vector<double> sums;
  pools.reserve(static_cast<std::size_t>(v.size()));
  sums.reserve(static_cast<std::size_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i) {
    pools.push_back({i, 1, v[i]});
    sums.push_back(v[i]);
    while (pools.size() >= 2) {
      Pool& last = pools.back();
      Pool& prev = pools[pools.size() - 2];
      if (prev.value > last.value) break;
      const double merged = sums[sums.size() - 2] + sums.back();
      prev.size += last.size;
      prev.value = merged / static_cast<double>(prev.size);
      sums[sums.size() - 2] = merged;
      pools.pop_back();
      sums.pop_back();
    }
  }
  return pools;
}

}  // namespace

Vector soft_threshold(const Vector& y, double tau) {
  require_positive_tau(tau, "soft_threshold");
  return y.unaryExpr([tau](double v) {
    const double mag = std::abs(v) - tau;
    return mag > 0 ? std::copysign(mag, v) : 0.0;
  });
}

L1JacobianMask l1_jacobian(const Vector& y, double tau) {
  require_positive_tau(tau, "l1_jacobian");
  return {y.unaryExpr([tau](double v) { return std::abs(v) > tau ? 1.0 : 0.0; })};
}

std::pair<Vector, PoolDecomposition> project_nonincreasing(const Vector& v) {
  PoolDecomposition dec;
  dec.perm.resize(static_cast<std::size_t>(v.size()));
  std::iota(dec.perm.begin(), dec.perm.end(), Index{0});
  dec.pools = pava_nonincreasing(v);
  Vector out(v.size());
  for (const Pool& pool : dec.pools) out.segment(pool.begin, pool.size).setConstant(pool.value);
  return {std::move(out), std::move(dec)};
}

double wilcoxon_loss(const Vector& u) {
  const Index n = u.size();
  if (n < 2) return 0.0;
  std::vector<double> sorted(u.data(), u.data() + n);
  std::sort(sorted.begin(), sorted.end());
  // sum_{i<j} |u_i - u_j| = sum_k (2k - n - 1) u_(k) over ascending order.
  double acc = 0;
  for (Index k = 0; k < n; ++k) acc += static_cast<double>(2 * (k + 1) - n - 1) * sorted[k];
  return 2.0 * acc / (static_cast<double>(n) * static_cast<double>(n - 1));
}

std::pair<Vector, PoolDecomposition> prox_wilcoxon(const Vector& y, double tau) {
  require_positive_tau(tau, "prox_wilcoxon");
  const Index n = y.size();
  if (n < 2) throw std::invalid_argument("prox_wilcoxon: need at least 2 entries");

  PoolDecomposition dec;
  dec.perm = descending_order(y);
  const double shift = 2.0 * tau / (static_cast<double>(n) * static_cast<double>(n - 1));
  Vector shifted(n);
  for (Index k = 0; k < n; ++k)
    shifted[k] = y[dec.perm[k]] - shift * static_cast<double>(n - 2 * k - 1);

  dec.pools = pava_nonincreasing(shifted);
  Vector out(n);
  for (const Pool& pool : dec.pools)
    for (Index k = pool.begin; k < pool.begin + pool.size; ++k) out[dec.perm[k]] = pool.value;
  return {std::move(out), std::move(dec)};
}

Vector wilcoxon_jacobian_apply(const PoolDecomposition& pools, const Vector& v) {
  if (v.size() != pools.size())
    throw std::invalid_argument("wilcoxon_jacobian_apply: dimension mismatch");
  Vector out = v;
  for (const Pool& pool : pools.pools) {
    if (!pool.active()) continue;
    double mean = 0;
    for (Index k = pool.begin; k < pool.begin + pool.size; ++k) mean += v[pools.perm[k]];
    mean /= static_cast<double>(pool.size);
    for (Index k = pool.begin; k < pool.begin + pool.size; ++k) out[pools.perm[k]] = mean;
  }
  return out;
}

Vector wilcoxon_subgradient(const Vector& u) {
  const Index n = u.size();
  if (n < 2) throw std::invalid_argument("wilcoxon_subgradient: need at least 2 entries");
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return u[a] < u[b]; });

  const double scale = 2.0 / (static_cast<double>(n) * static_cast<double>(n - 1));
  Vector g(n);
  Index start = 0;
  while (start < n) {
    Index stop = start + 1;
    while (stop < n && u[order[stop]] == u[order[start]]) ++stop;
    // positions start..stop-1 share the average of ranks start+1..stop
    const double rank = 0.5 * static_cast<double>(start + 1 + stop);
    for (Index k = start; k < stop; ++k)
      g[order[k]] = scale * (2.0 * rank - static_cast<double>(n) - 1.0);
    start = stop;
  }
  return g;
}

Vector prox_euclidean(const Vector& y, double tau) {
  require_positive_tau(tau, "prox_euclidean");
  const double norm = y.norm();
  if (norm <= tau) return Vector::Zero(y.size());
  return (1.0 - tau / norm) * y;
}

Vector euclidean_jacobian_apply(const Vector& y, double tau, const Vector& v) {
  require_positive_tau(tau, "euclidean_jacobian_apply");
  if (v.size() != y.size())
    throw std::invalid_argument("euclidean_jacobian_apply: dimension mismatch");
  const double norm = y.norm();
  if (norm <= tau) return Vector::Zero(y.size());
  return (1.0 - tau / norm) * v + (tau / (norm * norm * norm)) * y.dot(v) * y;
}

double loss_value(Loss loss, const Vector& u) {
  switch (loss) {
    case Loss::WilcoxonRank:
      return wilcoxon_loss(u);
    case Loss::EuclideanNorm:
      return u.norm();
  }
  throw std::invalid_argument("loss_value: unknown loss");
}

LossProx loss_prox(Loss loss, const Vector& y, double tau) {
  switch (loss) {
    case Loss::WilcoxonRank: {
      auto [point, pools] = prox_wilcoxon(y, tau);
      return {std::move(point), std::move(pools)};
    }
    case Loss::EuclideanNorm: {
      require_positive_tau(tau, "loss_prox");
      return {prox_euclidean(y, tau), EuclideanJacobian{y, y.norm(), tau}};
    }
  }
  throw std::invalid_argument("loss_prox: unknown loss");
}

namespace {
struct JacobianVisitor {
  const Vector& v;
  Vector operator()(const PoolDecomposition& pools) const {
    return wilcoxon_jacobian_apply(pools, v);
  }
  Vector operator()(const EuclideanJacobian& jac) const {
    if (v.size() != jac.y.size())
      throw std::invalid_argument("apply_jacobian: dimension mismatch");
    if (jac.norm <= jac.tau) return Vector::Zero(v.size());
    const double n3 = jac.norm * jac.norm * jac.norm;
    return (1.0 - jac.tau / jac.norm) * v + (jac.tau / n3) * jac.y.dot(v) * jac.y;
  }
};
}  // namespace

Vector apply_jacobian(const LossProx& prox, const Vector& v) {
  return std::visit(JacobianVisitor{v}, prox.jacobian);
}

Vector loss_subgradient(Loss loss, const Vector& u) {
  switch (loss) {
    case Loss::WilcoxonRank:
      return wilcoxon_subgradient(u);
    case Loss::EuclideanNorm: {
      const double norm = u.norm();
      if (norm == 0) return Vector::Zero(u.size());
      return u / norm;
    }
  }
  throw std::invalid_argument("loss_subgradient: unknown loss");
}

double moreau_envelope_at(Loss loss, const Vector& y, const Vector& prox_point, double tau) {
  return loss_value(loss, prox_point) + (prox_point - y).squaredNorm() / (2.0 * tau);
}

double moreau_envelope_value(Loss loss, const Vector& y, double tau) {
  const LossProx prox = loss_prox(loss, y, tau);
  return moreau_envelope_at(loss, y, prox.point, tau);
}

}  // namespace ranksieve
