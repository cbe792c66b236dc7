#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "ranksieve/prox.hpp"
#include "ranksieve/refsolver.hpp"

using namespace ranksieve;

namespace {

// Smallest gap between adjacent pool values and between sorted shifted inputs
// inside different pools; used to pick finite-difference steps that keep the
// pool structure fixed.
double structure_margin(const Vector& y, double tau) {
  const Index n = y.size();
  const auto [p, dec] = prox_wilcoxon(y, tau);
  double gap = INFINITY;
  for (std::size_t k = 1; k < dec.pools.size(); ++k)
    gap = std::min(gap, dec.pools[k - 1].value - dec.pools[k].value);
  // strict PAVA interiors: every proper prefix of a pool must have a mean above the pool value
  const double shift = 2 * tau / (static_cast<double>(n) * static_cast<double>(n - 1));
  for (const Pool& pool : dec.pools) {
    double acc = 0;
    for (Index k = pool.begin; k < pool.begin + pool.size - 1; ++k) {
      acc += y[dec.perm[k]] - shift * static_cast<double>(n - 2 * k - 1);
      gap = std::min(gap, acc / static_cast<double>(k - pool.begin + 1) - pool.value);
    }
  }
  return gap;
}

}  // namespace

TEST(SoftThreshold, Examples) {
  EXPECT_EQ(soft_threshold(Vector{{2.0, -0.5, 1.0}}, 1.0), (Vector{{1.0, 0.0, 0.0}}));
  EXPECT_EQ(soft_threshold(Vector::Zero(4), 0.3), Vector::Zero(4));
}

TEST(SoftThreshold, MatchesOneDimensionalSearch) {
  std::mt19937_64 g(11);
  for (int t = 0; t < 50; ++t) {
    const Vector y = oracle::randn(g, 6, 2.0);
    const double tau = oracle::uniform(g, 0.05, 2.0);
    const Vector s = soft_threshold(y, tau);
    for (Index i = 0; i < y.size(); ++i) {
      const double yi = y[i];
      const double z = oracle::minimize_1d(
          [&](double v) { return tau * std::abs(v) + 0.5 * (v - yi) * (v - yi); }, -10, 10);
      EXPECT_NEAR(s[i], z, 1e-7);
    }
  }
}

TEST(L1Jacobian, BoundaryIsZero) {
  EXPECT_EQ(l1_jacobian(Vector{{2.0, -0.5, 1.0}}, 1.0).diag, (Vector{{1.0, 0.0, 0.0}}));
  EXPECT_EQ(l1_jacobian(Vector{{3.0, -4.0}}, 1.0).diag, Vector::Ones(2));
}

TEST(L1Jacobian, FiniteDifferences) {
  std::mt19937_64 g(12);
  for (int t = 0; t < 100; ++t) {
    const Vector y = oracle::randn(g, 5, 2.0);
    const double tau = oracle::uniform(g, 0.1, 1.5);
    const Vector mask = l1_jacobian(y, tau).diag;
    for (Index i = 0; i < y.size(); ++i) {
      if (std::abs(std::abs(y[i]) - tau) < 1e-4) continue;
      Vector yp = y;
      yp[i] += 1e-7;
      const double fd = (soft_threshold(yp, tau)[i] - soft_threshold(y, tau)[i]) / 1e-7;
      EXPECT_NEAR(fd, mask[i], 1e-6);
    }
  }
}

TEST(ProjectNonincreasing, Examples) {
  const Vector v{{3.0, 1.0, 1.0, -2.0}};
  const auto [p, dec] = project_nonincreasing(v);
  EXPECT_EQ(p, v);
  for (const Pool& pool : dec.pools) EXPECT_EQ(pool.size, pool.value == 1.0 ? 2 : 1);

  const Vector w{{1.0, 3.0}};
  const auto [q, dq] = project_nonincreasing(w);
  EXPECT_EQ(q, (Vector{{2.0, 2.0}}));
  ASSERT_EQ(dq.pools.size(), 1u);
  EXPECT_TRUE(dq.pools[0].active());
  EXPECT_EQ(dq.pools[0].size, 2);
}

TEST(ProjectNonincreasing, StrictlyDecreasingInputHasSingletons) {
  const auto [p, dec] = project_nonincreasing(Vector{{5.0, 2.0, 1.0, -1.0}});
  EXPECT_EQ(dec.pools.size(), 4u);
  for (const Pool& pool : dec.pools) EXPECT_FALSE(pool.active());
}

TEST(ProjectNonincreasing, MatchesPartitionEnumeration) {
  std::mt19937_64 g(13);
  for (int t = 0; t < 2000; ++t) {
    const Index n = 1 + static_cast<Index>(g() % 8);
    const Vector v = oracle::randn(g, n);
    const auto [p, dec] = project_nonincreasing(v);
    EXPECT_LE((p - enumerate_isotonic_projection(v)).cwiseAbs().maxCoeff(), 1e-12);
    Index covered = 0;
    for (std::size_t k = 0; k < dec.pools.size(); ++k) {
      EXPECT_EQ(dec.pools[k].begin, covered);
      covered += dec.pools[k].size;
      if (k) EXPECT_GT(dec.pools[k - 1].value, dec.pools[k].value);
      for (Index i = dec.pools[k].begin; i < dec.pools[k].begin + dec.pools[k].size; ++i)
        EXPECT_EQ(p[i], dec.pools[k].value);
    }
    EXPECT_EQ(covered, n);
  }
}

TEST(ProjectNonincreasing, FirmlyNonexpansive) {
  std::mt19937_64 g(14);
  for (int t = 0; t < 500; ++t) {
    const Vector a = oracle::randn(g, 9), b = oracle::randn(g, 9);
    const Vector pa = project_nonincreasing(a).first, pb = project_nonincreasing(b).first;
    EXPECT_LE((pa - pb).squaredNorm(), (a - b).dot(pa - pb) + 1e-12);
  }
}

TEST(ProxWilcoxon, ConstantVectorIsFixed) {
  for (double tau : {0.1, 1.0, 10.0}) {
    const Vector y = Vector::Constant(6, 1.7);
    EXPECT_LE((prox_wilcoxon(y, tau).first - y).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(ProxWilcoxon, MatchesEnumerationOracle) {
  std::mt19937_64 g(15);
  for (int t = 0; t < 3000; ++t) {
    const Index n = 2 + static_cast<Index>(g() % 7);
    const Vector y = oracle::randn(g, n);
    for (double tau : {0.1, 1.0, 10.0}) {
      const Vector p = prox_wilcoxon(y, tau).first;
      EXPECT_LE((p - enumerate_prox_oracle(y, tau)).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(ProxWilcoxon, MoreauDecompositionThroughConjugate) {
  std::mt19937_64 g(16);
  for (int t = 0; t < 40; ++t) {
    const Index n = 2 + static_cast<Index>(g() % 5);
    const Vector y = oracle::randn(g, n, 0.5);
    const double tau = oracle::uniform(g, 0.2, 3.0);
    const Vector p = prox_wilcoxon(y, tau).first;
    EXPECT_LE((p - oracle::wilcoxon_prox_by_moreau(y, tau)).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(ProxWilcoxon, SortedShiftedProjectionIsNonincreasing) {
  std::mt19937_64 g(17);
  for (int t = 0; t < 300; ++t) {
    const Vector y = oracle::randn(g, 12);
    const auto [p, dec] = prox_wilcoxon(y, oracle::uniform(g, 0.01, 20));
    for (Index k = 1; k < y.size(); ++k) EXPECT_GE(p[dec.perm[k - 1]], p[dec.perm[k]]);
    // perm sorts y descending with ties by index
    for (Index k = 1; k < y.size(); ++k) EXPECT_GE(y[dec.perm[k - 1]], y[dec.perm[k]]);
  }
}

TEST(ProxWilcoxon, TiesKeepIndexOrder) {
  const auto [p, dec] = prox_wilcoxon(Vector{{1.0, 2.0, 1.0, 2.0}}, 0.01);
  EXPECT_EQ(dec.perm, (std::vector<Index>{1, 3, 0, 2}));
}

TEST(Prox, Nonexpansive) {
  std::mt19937_64 g(18);
  for (int t = 0; t < 500; ++t) {
    const Vector a = oracle::randn(g, 10), b = oracle::randn(g, 10);
    const double tau = oracle::uniform(g, 0.01, 5);
    EXPECT_LE((prox_wilcoxon(a, tau).first - prox_wilcoxon(b, tau).first).norm(),
              (a - b).norm() + 1e-12);
    EXPECT_LE((prox_euclidean(a, tau) - prox_euclidean(b, tau)).norm(), (a - b).norm() + 1e-12);
    EXPECT_LE((soft_threshold(a, tau) - soft_threshold(b, tau)).norm(), (a - b).norm() + 1e-12);
  }
}

TEST(WilcoxonJacobian, SingletonPoolsGiveIdentity) {
  std::mt19937_64 g(19);
  const Vector y{{5.0, 1.0, 3.0, -2.0}};
  const auto [p, dec] = prox_wilcoxon(y, 1e-3);
  for (const Pool& pool : dec.pools) ASSERT_FALSE(pool.active());
  const Vector v = oracle::randn(g, 4);
  EXPECT_EQ(wilcoxon_jacobian_apply(dec, v), v);
}

TEST(WilcoxonJacobian, FullPoolAverages) {
  std::mt19937_64 g(20);
  const Vector y = oracle::randn(g, 6, 0.01);
  const auto [p, dec] = prox_wilcoxon(y, 100.0);
  ASSERT_EQ(dec.pools.size(), 1u);
  const Vector v = oracle::randn(g, 6);
  EXPECT_LE((wilcoxon_jacobian_apply(dec, v) - Vector::Constant(6, v.mean())).norm(), 1e-14);
}

TEST(WilcoxonJacobian, DimensionMismatchThrows) {
  const auto [p, dec] = prox_wilcoxon(Vector{{1.0, 2.0, 3.0}}, 1.0);
  EXPECT_THROW(wilcoxon_jacobian_apply(dec, Vector::Zero(4)), std::invalid_argument);
}

TEST(WilcoxonJacobian, DirectionalFiniteDifferences) {
  std::mt19937_64 g(21);
  int checked = 0;
  for (int t = 0; t < 1000 && checked < 300; ++t) {
    const Index n = 2 + static_cast<Index>(g() % 5);
    const Vector y = oracle::randn(g, n);
    const double tau = oracle::uniform(g, 0.1, 3);
    const double margin = structure_margin(y, tau);
    if (margin < 1e-3) continue;
    const Vector v = oracle::randn(g, n);
    const double h = 1e-6;
    const auto [p, dec] = prox_wilcoxon(y, tau);
    const Vector fd = (prox_wilcoxon(y + h * v, tau).first - p) / h;
    const Vector Uv = wilcoxon_jacobian_apply(dec, v);
    EXPECT_LE((fd - Uv).norm(), 1e-5 * std::max(1.0, Uv.norm()));
    ++checked;
  }
  EXPECT_GE(checked, 100);
}

TEST(WilcoxonJacobian, SymmetricIdempotentAndBounded) {
  std::mt19937_64 g(22);
  for (int t = 0; t < 300; ++t) {
    const Vector y = oracle::randn(g, 15, 0.3);
    const auto [p, dec] = prox_wilcoxon(y, oracle::uniform(g, 0.1, 10));
    const Vector v = oracle::randn(g, 15), w = oracle::randn(g, 15);
    const Vector Uv = wilcoxon_jacobian_apply(dec, v);
    EXPECT_LE((wilcoxon_jacobian_apply(dec, Uv) - Uv).norm(), 1e-12);
    EXPECT_NEAR(v.dot(wilcoxon_jacobian_apply(dec, w)), w.dot(Uv), 1e-12);
    const double q = v.dot(Uv);
    EXPECT_GE(q, -1e-12);
    EXPECT_LE(q, v.squaredNorm() + 1e-12);
  }
}

TEST(WilcoxonSubgradient, Examples) {
  const Vector g = wilcoxon_subgradient(Vector{{-1.0, 0.0, 4.0}});
  EXPECT_LE((g - Vector{{-2.0 / 3, 0.0, 2.0 / 3}}).norm(), 1e-15);
  EXPECT_EQ(wilcoxon_subgradient(Vector::Constant(5, 3.0)), Vector::Zero(5));
}

TEST(WilcoxonSubgradient, SubgradientInequality) {
  std::mt19937_64 g(23);
  for (int t = 0; t < 500; ++t) {
    const Vector u = oracle::randn(g, 8);
    const Vector s = wilcoxon_subgradient(u);
    const Vector v = oracle::randn(g, 8);
    const double step = oracle::uniform(g, -0.5, 0.5);
    EXPECT_GE(oracle::wilcoxon(u + step * v) - oracle::wilcoxon(u), step * s.dot(v) - 1e-12);
  }
}

TEST(WilcoxonSubgradient, TiedEntriesStillSubgradient) {
  std::mt19937_64 g(24);
  for (int t = 0; t < 200; ++t) {
    Vector u = oracle::randn(g, 7);
    u[3] = u[1];
    u[5] = u[1];
    const Vector s = wilcoxon_subgradient(u);
    EXPECT_LE(oracle::wilcoxon_subdifferential_distance(u, s), 1e-9);
  }
}

TEST(WilcoxonLoss, MatchesPairLoop) {
  std::mt19937_64 g(25);
  for (int t = 0; t < 100; ++t) {
    const Vector u = oracle::randn(g, 2 + static_cast<Index>(g() % 20));
    EXPECT_NEAR(wilcoxon_loss(u), oracle::wilcoxon(u), 1e-12);
  }
}

TEST(ProxEuclidean, Examples) {
  EXPECT_EQ(prox_euclidean(Vector{{0.3, 0.4}}, 0.5), Vector::Zero(2));
  EXPECT_EQ(prox_euclidean(Vector{{0.3, 0.4}}, 1.0), Vector::Zero(2));
  EXPECT_LE((prox_euclidean(Vector{{4.0, 0.0, 0.0}}, 2.0) - Vector{{2.0, 0.0, 0.0}}).norm(), 1e-15);
}

TEST(ProxEuclidean, JacobianFiniteDifferences) {
  std::mt19937_64 g(26);
  for (int t = 0; t < 200; ++t) {
    const Vector y = oracle::randn(g, 6);
    const double tau = 0.5 * y.norm();
    const Vector v = oracle::randn(g, 6);
    const double h = 1e-6;
    const Vector fd = (prox_euclidean(y + h * v, tau) - prox_euclidean(y - h * v, tau)) / (2 * h);
    const Vector J = euclidean_jacobian_apply(y, tau, v);
    EXPECT_LE((fd - J).norm(), 1e-7 * std::max(1.0, J.norm()));
    EXPECT_EQ(apply_jacobian(loss_prox(Loss::EuclideanNorm, y, tau), v), J);
  }
  EXPECT_EQ(euclidean_jacobian_apply(Vector{{0.1, 0.1}}, 1.0, Vector{{1.0, 2.0}}), Vector::Zero(2));
}

TEST(MoreauEnvelope, Examples) {
  EXPECT_NEAR(moreau_envelope_value(Loss::WilcoxonRank, Vector::Constant(5, -2.0), 0.7), 0.0, 1e-15);
  const Vector y{{0.3, 0.4}};
  EXPECT_NEAR(moreau_envelope_value(Loss::EuclideanNorm, y, 2.0), y.squaredNorm() / 4.0, 1e-15);
}

TEST(MoreauEnvelope, ApproachesLossForSmallTau) {
  std::mt19937_64 g(27);
  for (int t = 0; t < 50; ++t) {
    const Vector y = oracle::randn(g, 8);
    for (Loss loss : {Loss::WilcoxonRank, Loss::EuclideanNorm}) {
      const double env = moreau_envelope_value(loss, y, 1e-6);
      EXPECT_LE(env, loss_value(loss, y) + 1e-15);
      EXPECT_GE(env, loss_value(loss, y) - 1e-5);
    }
  }
}

TEST(MoreauEnvelope, IsTheMinimumOverProbes) {
  std::mt19937_64 g(28);
  for (int t = 0; t < 50; ++t) {
    const Vector y = oracle::randn(g, 5);
    const double tau = oracle::uniform(g, 0.1, 3);
    for (Loss loss : {Loss::WilcoxonRank, Loss::EuclideanNorm}) {
      const double env = moreau_envelope_value(loss, y, tau);
      const Vector p = loss_prox(loss, y, tau).point;
      for (int k = 0; k < 20; ++k) {
        const Vector z = p + oracle::randn(g, 5, 0.1);
        EXPECT_LE(env, loss_value(loss, z) + (z - y).squaredNorm() / (2 * tau) + 1e-12);
      }
    }
  }
}

TEST(LossDispatch, SubgradientOfEuclideanNorm) {
  EXPECT_EQ(loss_subgradient(Loss::EuclideanNorm, Vector::Zero(3)), Vector::Zero(3));
  EXPECT_LE((loss_subgradient(Loss::EuclideanNorm, Vector{{3.0, 4.0}}) - Vector{{0.6, 0.8}}).norm(),
            1e-15);
}
