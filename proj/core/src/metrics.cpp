#include "ranksieve/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "ranksieve/sieve.hpp"

namespace ranksieve {

NonzeroSet nonzero_rule(const Vector& x) {
  NonzeroSet out;
  const Index p = x.size();
  std::vector<Index> order(static_cast<size_t>(p));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return std::abs(x[a]) > std::abs(x[b]); });
  double total = 0;
  for (Index i : order) total += std::abs(x[i]);
  if (total == 0) return out;
  const double target = 0.9999 * total;
  double acc = 0;
  Index k = 0;
  while (k < p) {
    acc += std::abs(x[order[static_cast<size_t>(k)]]);
    ++k;
    if (acc >= target) break;
  }
  out.k_hat = k;
  const double threshold = std::abs(x[order[static_cast<size_t>(k - 1)]]);
  for (Index i = 0; i < p; ++i)
    if (std::abs(x[i]) >= threshold) out.indices.push_back(i);
  return out;
}

double correct_ratio(const IndexSet& support, const Vector& reference) {
  if (support.empty()) return 0;
  const IndexSet ref = nonzero_rule(reference).indices;
  IndexSet s = support;
  std::sort(s.begin(), s.end());
  IndexSet common;
  std::set_intersection(s.begin(), s.end(), ref.begin(), ref.end(), std::back_inserter(common));
  return static_cast<double>(common.size()) / static_cast<double>(s.size());
}

MetricsReport evaluate(const ProblemData& data, const Vector& x, const Vector& u,
                       const Vector& alpha, const Vector& x_true,
                       const CovarianceDescriptor& sigma_x, const IndexSet* sieve_support,
                       const Vector* reference) {
  if (x.size() != data.p() || x_true.size() != data.p())
    throw std::invalid_argument("evaluate: dimension mismatch");
  MetricsReport m;
  m.val = objective(data, x);
  m.eta_kkt = kkt_residual(data, x, u, alpha).eta;
  const Vector diff = x - x_true;
  m.l1_err = diff.lpNorm<1>();
  m.l2_err = diff.norm();
  m.me = covariance_quadratic(sigma_x, diff);
  const NonzeroSet est = nonzero_rule(x);
  const NonzeroSet tru = nonzero_rule(x_true);
  m.k_hat = est.k_hat;
  std::vector<char> in_est(static_cast<size_t>(data.p()), 0), in_tru(static_cast<size_t>(data.p()), 0);
  for (Index i : est.indices) in_est[static_cast<size_t>(i)] = 1;
  for (Index i : tru.indices) in_tru[static_cast<size_t>(i)] = 1;
  for (Index i = 0; i < data.p(); ++i) {
    const auto k = static_cast<size_t>(i);
    if (in_est[k] && !in_tru[k]) ++m.fp;
    if (!in_est[k] && in_tru[k]) ++m.fn;
  }
  if (sieve_support && reference) m.cr = correct_ratio(*sieve_support, *reference);
  return m;
}

}  // namespace ranksieve
