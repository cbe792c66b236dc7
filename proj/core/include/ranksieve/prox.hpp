#pragma once

#include <variant>
#include <vector>

#include "ranksieve/model.hpp"

namespace ranksieve {

/// A maximal run of equal entries in the projection onto the nonincreasing cone.
struct Pool {
  Index begin = 0;  // position in the sorted vector
  Index size = 0;
  double value = 0;
  bool active() const noexcept { return size >= 2; }
};

/// Sorting permutation plus PAVA pools of a projection onto
/// {v : v_1 >= v_2 >= ... >= v_n}. perm[k] is the original index that lands in
/// sorted position k (perm is the identity for a bare projection).
struct PoolDecomposition {
  std::vector<Index> perm;
  std::vector<Pool> pools;

  Index size() const noexcept { return static_cast<Index>(perm.size()); }
};

/// Diagonal element of the Clarke Jacobian of soft thresholding: 1 where
/// |y_i| > tau strictly, 0 otherwise (boundary included).
struct L1JacobianMask {
  Vector diag;
};

/// Element of the generalized Jacobian of Prox_{tau ||.||_2} at y.
struct EuclideanJacobian {
  Vector y;
  double norm = 0;
  double tau = 0;
};

/// Prox point of a loss together with the Jacobian element selected there.
struct LossProx {
  Vector point;
  std::variant<PoolDecomposition, EuclideanJacobian> jacobian;
};

// --- L1 regularizer ---------------------------------------------------------

Vector soft_threshold(const Vector& y, double tau);
L1JacobianMask l1_jacobian(const Vector& y, double tau);

// --- isotonic projection and the Wilcoxon loss ------------------------------

/// Euclidean projection onto the nonincreasing cone by pool-adjacent-violators.
std::pair<Vector, PoolDecomposition> project_nonincreasing(const Vector& v);

double wilcoxon_loss(const Vector& u);

/// Prox_{tau h}(y) = P^T Proj(P y - 2tau/(n(n-1)) w),  w_k = n - 2k + 1.
/// P sorts y into nonincreasing order, ties kept in index order.
std::pair<Vector, PoolDecomposition> prox_wilcoxon(const Vector& y, double tau);

/// U v with U = P^T Diag(Gamma_1..Gamma_N) P: averages v over every active pool.
Vector wilcoxon_jacobian_apply(const PoolDecomposition& pools, const Vector& v);

/// Rank-score element of dh(u): 2/(n(n-1)) (2 R_i - n - 1), average ranks on ties.
Vector wilcoxon_subgradient(const Vector& u);

// --- Euclidean norm loss ----------------------------------------------------

Vector prox_euclidean(const Vector& y, double tau);
Vector euclidean_jacobian_apply(const Vector& y, double tau, const Vector& v);

// --- loss dispatch ----------------------------------------------------------

double loss_value(Loss loss, const Vector& u);
LossProx loss_prox(Loss loss, const Vector& y, double tau);
Vector apply_jacobian(const LossProx& prox, const Vector& v);
Vector loss_subgradient(Loss loss, const Vector& u);

/// min_z h(z) + ||z - y||^2 / (2 tau), evaluated at the prox point.
double moreau_envelope_value(Loss loss, const Vector& y, double tau);

/// Same envelope once the prox point is already known.
double moreau_envelope_at(Loss loss, const Vector& y, const Vector& prox_point, double tau);

}  // namespace ranksieve
