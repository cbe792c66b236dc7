#include <charconv>
#include <fstream>
#include <iostream>

#include "commands.hpp"
#include "matrix_io.hpp"
#include "ranksieve/errors.hpp"
#include "ranksieve/refsolver.hpp"
#include "ranksieve/sieve.hpp"
#include "ranksieve/tuning.hpp"
#include "report_json.hpp"

namespace ranksieve::cli {
namespace {

std::optional<double> parse_positive(const std::string& s) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !(v > 0) || !std::isfinite(v))
    return std::nullopt;
  return v;
}

void emit(const nlohmann::json& j, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << j.dump(2) << '\n';
    return;
  }
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw UsageError("cannot write " + path);
  f << j.dump(2) << '\n';
}

}  // namespace

int cmd_solve(const SolveOptions& o, std::ostream& out, std::ostream& err) {
  const Loss loss = parse_loss(o.loss);
  const Matrix A = read_matrix(o.matrix);
  const Vector b = read_vector(o.response);
  if (b.size() != A.rows())
    throw ParseError("response has " + std::to_string(b.size()) + " entries but the matrix has " +
                     std::to_string(A.rows()) + " rows");

  nlohmann::json meta;
  double lambda = 0;
  if (o.lambda == "auto") {
    if (loss == Loss::WilcoxonRank) {
      LambdaSpec ls;
      ls.seed = o.seed;
      ls.draws = o.lambda_draws;
      ls.validate();
      lambda = rank_lambda(A, ls);
      meta["lambda_seed"] = o.seed;
      meta["lambda_draws"] = o.lambda_draws;
    } else {
      lambda = sqrt_lasso_lambda(A.rows());
    }
    meta["lambda_auto"] = true;
  } else if (auto v = parse_positive(o.lambda)) {
    lambda = *v;
    meta["lambda_auto"] = false;
  } else {
    throw UsageError("--lambda must be 'auto' or a positive number, got '" + o.lambda + "'");
  }

  const ProblemData data(A, b, lambda, loss);
  meta["loss"] = std::string(to_string(loss));
  meta["lambda"] = lambda;
  meta["n"] = data.n();
  meta["p"] = data.p();

  if (o.reference) {
    SplittingOptions so;
    so.tol = o.reference_tol;
    so.max_iter = o.reference_max_iter;
    const SplittingResult r = splitting_solve(data, so);
    nlohmann::json j = report_json(r);
    j.update(meta);
    j["status"] = r.converged ? "ok" : "nonconverged";
    emit(j, o.out, out);
    return r.converged ? kOk : kNumeric;
  }

  SolverConfig cfg;
  cfg.eps = o.eps;
  cfg.eps_tilde = o.eps_tilde;
  cfg.m_add = o.m_add;
  cfg.m_cap = o.m_cap;
  cfg.validate();

  std::ofstream trace;
  if (!o.trace.empty()) {
    trace.open(o.trace, std::ios::trunc);
    if (!trace) throw UsageError("cannot write " + o.trace);
    trace << "round,support_size,res,eta_kkt,val,t_ssn,added\n";
  }
  SieveOptions so;
  so.full_space = o.no_sieve;
  if (trace.is_open())
    so.observer = [&trace](const SieveTraceRecord& r) {
      trace << r.round << ',' << r.support_size << ',' << format_double(r.res) << ','
            << format_double(r.eta_kkt) << ',' << format_double(r.val) << ','
            << format_double(r.ssn_seconds) << ',' << r.added << '\n';
    };

  try {
    const SolveReport rep = as_solve(data, cfg, so);
    nlohmann::json j = report_json(rep);
    j.update(meta);
    j["status"] = rep.converged ? "ok" : "nonconverged";
    emit(j, o.out, out);
    if (!rep.converged) err << "ranksieve: KKT residual " << rep.res << " above eps " << o.eps << '\n';
    return rep.converged ? kOk : kNumeric;
  } catch (const NonConvergence& e) {
    nlohmann::json j = meta;
    j["status"] = "nonconverged";
    j["message"] = e.what();
    j["res"] = e.residual();
    if (e.best_iterate().size() == data.p()) j["x"] = vector_json(e.best_iterate());
    emit(j, o.out, out);
    err << "ranksieve: " << e.what() << '\n';
    return kNumeric;
  }
}

}  // namespace ranksieve::cli
