#include "report_json.hpp"

#include <cmath>

namespace ranksieve::cli {
namespace {

// JSON has no Inf/NaN; emit null for them
nlohmann::json number(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

}  // namespace

nlohmann::json vector_json(const Vector& v) {
  nlohmann::json a = nlohmann::json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(number(v[i]));
  return a;
}

nlohmann::json index_json(const IndexSet& s) {
  nlohmann::json a = nlohmann::json::array();
  for (Index i : s) a.push_back(i);
  return a;
}

nlohmann::json report_json(const SolveReport& r) {
  nlohmann::json j;
  j["method"] = "sieve";
  j["val"] = number(r.val);
  j["res"] = number(r.res);
  j["eta_kkt"] = number(r.eta_kkt);
  j["converged"] = r.converged;
  j["used_fallback"] = r.used_fallback;
  j["iterations"] = {{"as", r.iters.as},   {"ppa", r.iters.ppa}, {"alm", r.iters.alm},
                     {"ssn", r.iters.ssn}, {"cg", r.iters.cg},   {"line_search", r.iters.line_search}};
  j["wall_time_total"] = r.wall_time_total;
  j["wall_time_ssn"] = r.wall_time_ssn;
  j["empty_expansions"] = r.empty_expansions;
  j["support"] = index_json(r.support);
  j["nonzeros"] = index_json(nonzero_rule(r.x).indices);
  j["x"] = vector_json(r.x);
  j["alpha"] = vector_json(r.alpha);
  nlohmann::json trace = nlohmann::json::array();
  for (const SieveTraceRecord& t : r.trace)
    trace.push_back({{"round", t.round},
                     {"support_size", t.support_size},
                     {"res", number(t.res)},
                     {"eta_kkt", number(t.eta_kkt)},
                     {"val", number(t.val)},
                     {"t_ssn", t.ssn_seconds},
                     {"added", t.added}});
  j["trace"] = std::move(trace);
  return j;
}

nlohmann::json report_json(const SplittingResult& r) {
  nlohmann::json j;
  j["method"] = "reference";
  j["val"] = number(r.val);
  j["primal_residual"] = number(r.primal_residual);
  j["dual_residual"] = number(r.dual_residual);
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["nonzeros"] = index_json(nonzero_rule(r.x).indices);
  j["x"] = vector_json(r.x);
  j["alpha"] = vector_json(r.alpha);
  return j;
}

nlohmann::json spec_json(const SynthSpec& s, double lambda) {
  nlohmann::json j;
  j["experiment"] = std::string(to_string(s.experiment));
  j["n"] = s.n;
  j["p"] = s.p;
  j["seed"] = s.seed;
  j["loss"] = std::string(to_string(s.loss));
  j["lambda"] = lambda;
  j["lambda_auto"] = s.lambda == 0;
  j["lambda_draws"] = s.lambda_draws;
  j["covariance"] = {{"kind", std::string(to_string(s.covariance.kind))},
                     {"r", s.covariance.r},
                     {"toeplitz", s.covariance.kind == CovarianceKind::Toeplitz}};
  if (s.covariance.kind == CovarianceKind::Exponential) {
    j["covariance"]["exp_rate"] = s.covariance.exp_rate;
    j["covariance"]["exp_mean_three"] = s.exp_mean_three;
  }
  j["error"] = to_string(s.error);
  j["beta"] = std::string(to_string(s.beta));
  return j;
}

}  // namespace ranksieve::cli
