#include "ranksieve/synth.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "ranksieve/random.hpp"
#include "ranksieve/tuning.hpp"

namespace ranksieve {

void SynthSpec::validate() const {
  if (n < 2 || p < 1) throw std::invalid_argument("SynthSpec: need n >= 2 and p >= 1");
  if (covariance.p != p) throw std::invalid_argument("SynthSpec: covariance dimension differs from p");
  const double r = covariance.r;
  switch (covariance.kind) {
    case CovarianceKind::CompoundSymmetry:
      if (!(r > -1 && r < 1)) throw std::invalid_argument("SynthSpec: correlation must lie in (-1,1)");
      if (p > 1 && r < -1.0 / static_cast<double>(p - 1))
        throw std::invalid_argument("SynthSpec: compound symmetry matrix is not positive definite");
      break;
    case CovarianceKind::Toeplitz:
      if (!(r > -1 && r < 1)) throw std::invalid_argument("SynthSpec: correlation must lie in (-1,1)");
      break;
    case CovarianceKind::Exponential:
      if (!(covariance.exp_rate > 0)) throw std::invalid_argument("SynthSpec: rate must be positive");
      break;
    case CovarianceKind::Identity:
      break;
  }
  if (error.kind == ErrorKind::Normal && !(error.variance >= 0))
    throw std::invalid_argument("SynthSpec: error variance must be nonnegative");
  if (lambda < 0) throw std::invalid_argument("SynthSpec: lambda must be >= 0 (0 = automatic)");
  if (beta == BetaPattern::Staircase25 && p < 25)
    throw std::invalid_argument("SynthSpec: the staircase signal needs p >= 25");
}

SynthSpec experiment_spec(Experiment e, Index n, Index p, std::uint64_t seed,
                          std::optional<ErrorSpec> error, std::optional<double> r) {
  SynthSpec s;
  s.experiment = e;
  s.n = n;
  s.p = p;
  s.seed = seed;
  s.covariance.p = p;
  s.covariance.kind = CovarianceKind::CompoundSymmetry;
  s.covariance.r = 0.5;
  switch (e) {
    case Experiment::E1:
    case Experiment::E3:
      s.beta = BetaPattern::Sqrt3First3;
      s.error = {ErrorKind::Normal, 1.0};
      break;
    case Experiment::E2:
      s.beta = BetaPattern::Staircase25;
      s.error = {ErrorKind::Normal, 0.25};
      break;
    case Experiment::E4:
      s.covariance.kind = CovarianceKind::Exponential;
      s.covariance.r = 0;
      s.beta = BetaPattern::Random20Percent;
      s.error = {ErrorKind::Normal, 0.01};
      break;
    case Experiment::E5:
    case Experiment::E6:
      s.covariance.kind = CovarianceKind::Toeplitz;
      s.beta = BetaPattern::OnesFirst5;
      s.loss = Loss::EuclideanNorm;
      s.error = e == Experiment::E5 ? ErrorSpec{ErrorKind::Normal, 1.0}
                                    : ErrorSpec{ErrorKind::T4OverSqrt2, 0};
      break;
  }
  if (error) s.error = *error;
  if (r) s.covariance.r = *r;
  return s;
}

namespace {

double draw_error(Rng& rng, const ErrorSpec& e) {
  switch (e.kind) {
    case ErrorKind::Normal:
      return std::sqrt(e.variance) * rng.normal();
    case ErrorKind::Mixture: {
      const double u = rng.uniform();
      const double z = rng.normal();
      return u < 0.95 ? z : 10.0 * z;
    }
    case ErrorKind::Sqrt2T4:
      return std::sqrt(2.0) * rng.student_t4();
    case ErrorKind::Cauchy:
      return rng.cauchy();
    case ErrorKind::T4OverSqrt2:
      return rng.student_t4() / std::sqrt(2.0);
  }
  return 0;
}

Vector make_signal(const SynthSpec& s, Rng& rng) {
  Vector x = Vector::Zero(s.p);
  switch (s.beta) {
    case BetaPattern::Sqrt3First3:
      for (Index i = 0; i < std::min<Index>(3, s.p); ++i) x[i] = std::sqrt(3.0);
      break;
    case BetaPattern::Staircase25: {
      static const double steps[] = {2, 2, 2, 2, 1.75, 1.75, 1.75, 1.5, 1.5, 1.5, 1.25, 1.25, 1.25,
                                     1, 1, 1, 0.75, 0.75, 0.75, 0.5, 0.5, 0.5, 0.25, 0.25, 0.25};
      for (Index i = 0; i < 25; ++i) x[i] = steps[i];
      break;
    }
    case BetaPattern::Random20Percent: {
      const Index k = static_cast<Index>(std::llround(0.2 * static_cast<double>(s.p)));
      std::vector<Index> idx(static_cast<size_t>(s.p));
      std::iota(idx.begin(), idx.end(), Index{0});
      // partial Fisher-Yates: the first k slots are a uniform sample
      for (Index i = 0; i < k; ++i) {
        const Index j = i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(s.p - i)));
        std::swap(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)]);
      }
      for (Index i = 0; i < k; ++i) x[idx[static_cast<size_t>(i)]] = rng.normal();
      break;
    }
    case BetaPattern::OnesFirst5:
      for (Index i = 0; i < std::min<Index>(5, s.p); ++i) x[i] = 1.0;
      break;
  }
  return x;
}

void fill_design(const SynthSpec& s, Rng& rng, Matrix& X) {
  const Index p = s.p;
  const CovarianceDescriptor& c = s.covariance;
  Vector z(p);
  for (Index i = 0; i < s.n; ++i) {
    switch (c.kind) {
      case CovarianceKind::Identity:
        for (Index j = 0; j < p; ++j) X(i, j) = rng.normal();
        break;
      case CovarianceKind::CompoundSymmetry: {
        // x = a z + c0 (1^T z) 1 has covariance a^2 I + (2 a c0 + p c0^2) 1 1^T
        const double a = std::sqrt(1 - c.r);
        const double pd = static_cast<double>(p);
        const double c0 = (-a + std::sqrt(a * a + c.r * pd)) / pd;
        for (Index j = 0; j < p; ++j) z[j] = rng.normal();
        const double shift = c0 * z.sum();
        for (Index j = 0; j < p; ++j) X(i, j) = a * z[j] + shift;
        break;
      }
      case CovarianceKind::Toeplitz: {
        const double s1 = std::sqrt(1 - c.r * c.r);
        double prev = rng.normal();
        X(i, 0) = prev;
        for (Index j = 1; j < p; ++j) {
          prev = c.r * prev + s1 * rng.normal();
          X(i, j) = prev;
        }
        break;
      }
      case CovarianceKind::Exponential:
        for (Index j = 0; j < p; ++j) X(i, j) = rng.exponential(c.exp_rate);
        break;
    }
  }
}

}  // namespace

Instance generate(const SynthSpec& spec_in) {
  SynthSpec spec = spec_in;
  if (spec.covariance.kind == CovarianceKind::Exponential)
    spec.covariance.exp_rate = spec.exp_mean_three ? 1.0 / 3.0 : 3.0;
  spec.validate();
  Rng rng(spec.seed);
  Vector x_true = make_signal(spec, rng);
  Matrix X(spec.n, spec.p);
  fill_design(spec, rng, X);
  Vector b = X * x_true;
  for (Index i = 0; i < spec.n; ++i) b[i] += draw_error(rng, spec.error);

  double lambda = spec.lambda;
  if (lambda == 0) {
    if (spec.loss == Loss::WilcoxonRank) {
      LambdaSpec ls;
      ls.seed = split_seed(spec.seed, 0);
      ls.draws = spec.lambda_draws;
      lambda = rank_lambda(X, ls);
    } else {
      lambda = sqrt_lasso_lambda(spec.n);
    }
  }
  ProblemData data(std::move(X), std::move(b), lambda, spec.loss);
  return Instance{std::move(data), std::move(x_true), spec.covariance, spec};
}

Matrix covariance_matrix(const CovarianceDescriptor& c) {
  const Index p = c.p;
  Matrix S = Matrix::Identity(p, p);
  switch (c.kind) {
    case CovarianceKind::Identity:
      break;
    case CovarianceKind::CompoundSymmetry:
      S.setConstant(c.r);
      S.diagonal().setOnes();
      break;
    case CovarianceKind::Toeplitz:
      for (Index j = 0; j < p; ++j)
        for (Index k = 0; k < p; ++k) S(j, k) = std::pow(c.r, static_cast<double>(std::abs(j - k)));
      break;
    case CovarianceKind::Exponential:
      S /= c.exp_rate * c.exp_rate;
      break;
  }
  return S;
}

double covariance_quadratic(const CovarianceDescriptor& c, const Vector& v) {
  if (v.size() != c.p) throw std::invalid_argument("covariance_quadratic: dimension mismatch");
  switch (c.kind) {
    case CovarianceKind::Identity:
      return v.squaredNorm();
    case CovarianceKind::CompoundSymmetry: {
      const double s = v.sum();
      return (1 - c.r) * v.squaredNorm() + c.r * s * s;
    }
    case CovarianceKind::Exponential:
      return v.squaredNorm() / (c.exp_rate * c.exp_rate);
    case CovarianceKind::Toeplitz: {
      // O(p^2) but skips zero entries, which dominate for sparse differences
      std::vector<Index> nz;
      for (Index j = 0; j < v.size(); ++j)
        if (v[j] != 0) nz.push_back(j);
      double acc = 0;
      for (Index j : nz)
        for (Index k : nz) acc += v[j] * v[k] * std::pow(c.r, static_cast<double>(std::abs(j - k)));
      return acc;
    }
  }
  return 0;
}

Experiment parse_experiment(std::string_view s) {
  static const char* names[] = {"E1", "E2", "E3", "E4", "E5", "E6"};
  for (int i = 0; i < 6; ++i) {
    const std::string_view nm = names[i];
    if (s == nm || (s.size() == 2 && (s[0] == 'e' || s[0] == 'E') && s[1] == nm[1]))
      return static_cast<Experiment>(i);
  }
  throw std::invalid_argument("unknown experiment '" + std::string(s) + "'");
}

std::string_view to_string(Experiment e) {
  static const char* names[] = {"E1", "E2", "E3", "E4", "E5", "E6"};
  return names[static_cast<int>(e)];
}

ErrorSpec parse_error(std::string_view s) {
  if (s.rfind("normal:", 0) == 0 || s.rfind("N:", 0) == 0) {
    const std::string v(s.substr(s.find(':') + 1));
    size_t used = 0;
    double var = 0;
    try {
      var = std::stod(v, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != v.size() || !(var >= 0))
      throw std::invalid_argument("bad normal variance in '" + std::string(s) + "'");
    return {ErrorKind::Normal, var};
  }
  if (s == "mn" || s == "MN" || s == "mixture") return {ErrorKind::Mixture, 0};
  if (s == "sqrt2t4") return {ErrorKind::Sqrt2T4, 0};
  if (s == "cauchy") return {ErrorKind::Cauchy, 0};
  if (s == "t4/sqrt2" || s == "t4sqrt2inv") return {ErrorKind::T4OverSqrt2, 0};
  throw std::invalid_argument("unknown error distribution '" + std::string(s) + "'");
}

std::string to_string(const ErrorSpec& e) {
  switch (e.kind) {
    case ErrorKind::Normal: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "normal:%g", e.variance);
      return buf;
    }
    case ErrorKind::Mixture:
      return "mn";
    case ErrorKind::Sqrt2T4:
      return "sqrt2t4";
    case ErrorKind::Cauchy:
      return "cauchy";
    case ErrorKind::T4OverSqrt2:
      return "t4/sqrt2";
  }
  return "?";
}

std::string_view to_string(CovarianceKind k) {
  switch (k) {
    case CovarianceKind::CompoundSymmetry:
      return "compound_symmetry";
    case CovarianceKind::Toeplitz:
      return "toeplitz";
    case CovarianceKind::Identity:
      return "identity";
    case CovarianceKind::Exponential:
      return "exponential";
  }
  return "?";
}

std::string_view to_string(BetaPattern b) {
  switch (b) {
    case BetaPattern::Sqrt3First3:
      return "sqrt3_first3";
    case BetaPattern::Staircase25:
      return "staircase25";
    case BetaPattern::Random20Percent:
      return "random20";
    case BetaPattern::OnesFirst5:
      return "ones_first5";
  }
  return "?";
}

}  // namespace ranksieve
