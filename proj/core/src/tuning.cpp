#include "ranksieve/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "ranksieve/random.hpp"

namespace ranksieve {

void LambdaSpec::validate() const {
  if (!(c > 0)) throw std::invalid_argument("LambdaSpec: c must be positive");
  if (!(alpha0 > 0 && alpha0 < 1)) throw std::invalid_argument("LambdaSpec: alpha0 must lie in (0,1)");
  if (draws < 100) throw std::invalid_argument("LambdaSpec: need at least 100 draws");
}

double rank_lambda(const Matrix& X, const LambdaSpec& spec) {
  spec.validate();
  const Index n = X.rows();
  if (n < 2) throw std::invalid_argument("rank_lambda: need n >= 2");
  Rng rng(spec.seed);
  const double scale = 2.0 / (static_cast<double>(n) * static_cast<double>(n - 1));
  std::vector<double> norms;
  norms.reserve(static_cast<size_t>(spec.draws));
  std::vector<int> ranks(static_cast<size_t>(n));
  constexpr int kBlock = 64;
  Matrix xi(n, kBlock);
  for (int start = 0; start < spec.draws; start += kBlock) {
    const int cols = std::min(kBlock, spec.draws - start);
    for (int d = 0; d < cols; ++d) {
      std::iota(ranks.begin(), ranks.end(), 1);
      rng.shuffle(ranks);
      for (Index i = 0; i < n; ++i)
        xi(i, d) = 2.0 * ranks[static_cast<size_t>(i)] - static_cast<double>(n + 1);
    }
    const Matrix S = X.transpose() * xi.leftCols(cols);
    for (int d = 0; d < cols; ++d)
      norms.push_back(S.cols() > 0 && S.rows() > 0 ? scale * S.col(d).cwiseAbs().maxCoeff() : 0.0);
  }
  std::sort(norms.begin(), norms.end());
  const double pos = std::ceil((1.0 - spec.alpha0) * spec.draws - 1e-9);
  const size_t k = static_cast<size_t>(std::clamp(pos, 1.0, static_cast<double>(spec.draws))) - 1;
  return std::max(spec.c * norms[k], 1e-12);
}

double inverse_normal_cdf(double prob) {
  if (!(prob > 0 && prob < 1)) {
    if (prob == 0) return -INFINITY;
    if (prob == 1) return INFINITY;
    throw std::invalid_argument("inverse_normal_cdf: probability outside [0,1]");
  }
  // Acklam's rational approximation followed by one Halley step.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                             1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                             6.680131188771972e+01,  -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                             -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                             3.754408661907416e+00};
  const double lo = 0.02425, hi = 1 - lo;
  double x;
  if (prob < lo) {
    const double q = std::sqrt(-2 * std::log(prob));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  } else if (prob <= hi) {
    const double q = prob - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  } else {
    const double q = std::sqrt(-2 * std::log1p(-prob));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  for (int it = 0; it < 2; ++it) {
    // upper tail through erfc keeps the residual accurate near 1
    const double e = x > 0 ? (1 - prob) - 0.5 * std::erfc(x / std::numbers::sqrt2)
                           : 0.5 * std::erfc(-x / std::numbers::sqrt2) - prob;
    const double u = e * std::sqrt(2 * std::numbers::pi) * std::exp(x * x / 2);
    x = x - u / (1 + x * u / 2);
  }
  return x;
}

double sqrt_lasso_lambda(Index n) {
  if (n < 1) throw std::invalid_argument("sqrt_lasso_lambda: need n >= 1");
  return 1.1 * inverse_normal_cdf(1.0 - 0.05 / (2.0 * static_cast<double>(n)));
}

}  // namespace ranksieve
