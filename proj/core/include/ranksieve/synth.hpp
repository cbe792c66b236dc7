#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "ranksieve/model.hpp"

namespace ranksieve {

enum class Experiment { E1, E2, E3, E4, E5, E6 };

enum class CovarianceKind {
  CompoundSymmetry,  // 1 on the diagonal, r elsewhere
  Toeplitz,          // r^{|j-k|}
  Identity,
  Exponential,       // iid exponential entries (not Gaussian)
};

/// Population covariance of one design row, kept in structured form.
struct CovarianceDescriptor {
  CovarianceKind kind = CovarianceKind::Identity;
  double r = 0;                  // correlation parameter
  double exp_rate = 3;           // Exponential only
  Index p = 0;
};

enum class ErrorKind {
  Normal,       // N(0, variance)
  Mixture,      // 0.95 N(0,1) + 0.05 N(0,100)
  Sqrt2T4,      // sqrt(2) * t(4)
  Cauchy,       // Cauchy(0,1)
  T4OverSqrt2,  // t(4) / sqrt(2)
};

struct ErrorSpec {
  ErrorKind kind = ErrorKind::Normal;
  double variance = 1;  // Normal only
};

enum class BetaPattern { Sqrt3First3, Staircase25, Random20Percent, OnesFirst5 };

struct SynthSpec {
  Experiment experiment = Experiment::E1;
  Index n = 100;
  Index p = 400;
  CovarianceDescriptor covariance;
  ErrorSpec error;
  BetaPattern beta = BetaPattern::Sqrt3First3;
  Loss loss = Loss::WilcoxonRank;
  double lambda = 0;          // 0: tuning-free choice for the loss
  int lambda_draws = 1000;
  bool exp_mean_three = false;  // E4 design as mean 3 instead of rate 3
  std::uint64_t seed = 1;

  void validate() const;
};

/// Spec for one experiment with its default design, errors and signal.
/// `r` overrides the compound-symmetry correlation (E3), `error` the error law.
SynthSpec experiment_spec(Experiment e, Index n, Index p, std::uint64_t seed,
                          std::optional<ErrorSpec> error = std::nullopt,
                          std::optional<double> r = std::nullopt);

struct Instance {
  ProblemData data;
  Vector x_true;
  CovarianceDescriptor sigma_x;
  SynthSpec spec;
};

/// Draw order: signal (E4 only), then X row by row, then errors.
Instance generate(const SynthSpec& spec);

/// Dense design-row covariance; for tests and small p.
Matrix covariance_matrix(const CovarianceDescriptor& c);

/// v^T Sigma v without forming Sigma when the structure allows it.
double covariance_quadratic(const CovarianceDescriptor& c, const Vector& v);

Experiment parse_experiment(std::string_view s);
std::string_view to_string(Experiment e);
/// "normal:<var>", "mn", "sqrt2t4", "cauchy", "t4/sqrt2".
ErrorSpec parse_error(std::string_view s);
std::string to_string(const ErrorSpec& e);
std::string_view to_string(CovarianceKind k);
std::string_view to_string(BetaPattern b);

}  // namespace ranksieve
