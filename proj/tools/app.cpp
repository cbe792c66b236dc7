#include <iostream>

#include "commands.hpp"
#include "json_config.hpp"
#include "matrix_io.hpp"
#include "ranksieve/errors.hpp"

namespace ranksieve::cli {
namespace {

// --config lives on the root app; subcommands let it fall through
void add_config(CLI::App* sub) { sub->fallthrough(); }

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"ranksieve: sparse regression with the Wilcoxon rank loss or the square-root lasso"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.set_config("--config", "", "JSON file supplying any long flag; command-line values win");
  app.config_formatter(std::make_shared<JsonConfig>(&app));
  // inherited by the subcommands created below
  app.allow_config_extras(CLI::config_extras_mode::error);

  SolveOptions so;
  CLI::App* solve = app.add_subcommand("solve", "Solve one instance read from files");
  add_config(solve);
  solve->add_option("matrix", so.matrix, "Design matrix (CSV or RSMX)")->required();
  solve->add_option("response", so.response, "Response vector (CSV or RSMX)")->required();
  solve->add_option("--lambda", so.lambda, "Penalty weight, or 'auto' for the tuning-free choice");
  solve->add_option("--loss", so.loss, "rank | sqrt")->check(CLI::IsMember({"rank", "sqrt"}));
  solve->add_option("--eps", so.eps, "Outer KKT tolerance");
  solve->add_option("--eps-tilde", so.eps_tilde, "Restricted subproblem tolerance (< eps)");
  solve->add_option("--m-add", so.m_add, "Coordinates added per sieve round (0 = p/100)");
  solve->add_option("--m-cap", so.m_cap, "Cap on additions per round (0 = p/40)");
  solve->add_flag("--no-sieve", so.no_sieve, "Solve on all coordinates from the start");
  solve->add_flag("--reference", so.reference, "Use the operator-splitting reference solver");
  solve->add_option("--reference-tol", so.reference_tol, "Reference solver residual tolerance");
  solve->add_option("--reference-max-iter", so.reference_max_iter, "Reference solver iteration cap");
  solve->add_option("--seed", so.seed, "Seed of the lambda simulation");
  solve->add_option("--lambda-draws", so.lambda_draws, "Permutations drawn for lambda=auto");
  solve->add_option("--trace", so.trace, "Write a per-round trace CSV here");
  solve->add_option("--out", so.out, "Write the JSON report here instead of stdout");

  SynthOptions sy;
  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic instance");
  add_config(synth);
  synth->add_option("--experiment", sy.experiment, "E1 .. E6");
  synth->add_option("--n", sy.n, "Samples")->check(CLI::PositiveNumber);
  synth->add_option("--p", sy.p, "Features")->check(CLI::PositiveNumber);
  synth->add_option("--seed", sy.seed, "Random seed");
  synth->add_option("--error", sy.error, "normal:<var> | mn | sqrt2t4 | cauchy | t4/sqrt2");
  synth->add_option("--r", sy.r, "Compound-symmetry correlation override");
  synth->add_option("--lambda", sy.lambda, "Penalty weight recorded in spec.json, or 'auto'");
  synth->add_option("--lambda-draws", sy.lambda_draws, "Permutations drawn for lambda=auto");
  synth->add_option("--format", sy.format, "Matrix file format")->check(CLI::IsMember({"csv", "rsmx"}));
  synth->add_option("--out-dir", sy.out_dir, "Output directory")->required();

  TuneOptions tu;
  CLI::App* tune = app.add_subcommand("tune", "Tuning-free lambda for a design");
  add_config(tune);
  tune->add_option("matrix", tu.matrix, "Design matrix (CSV or RSMX)");
  tune->add_option("--loss", tu.loss, "rank | sqrt")->check(CLI::IsMember({"rank", "sqrt"}));
  tune->add_option("--n", tu.n, "Sample count when no matrix is given (sqrt loss)");
  tune->add_option("--c", tu.c, "Multiplier on the simulated quantile");
  tune->add_option("--alpha0", tu.alpha0, "Tail level");
  tune->add_option("--draws", tu.draws, "Random permutations");
  tune->add_option("--seed", tu.seed, "Random seed");

  BenchOptions be;
  CLI::App* bench = app.add_subcommand("bench", "Seeded replications of an experiment to CSV");
  add_config(bench);
  bench->add_option("--experiment", be.experiment, "E1 .. E6");
  bench->add_option("--n", be.n, "Samples")->check(CLI::PositiveNumber);
  bench->add_option("--p", be.p, "Features")->check(CLI::PositiveNumber);
  bench->add_option("--reps", be.reps, "Replications")->check(CLI::PositiveNumber);
  bench->add_option("--seed", be.seed, "Seed of the first replication");
  bench->add_option("--error", be.error, "normal:<var> | mn | sqrt2t4 | cauchy | t4/sqrt2");
  bench->add_option("--r", be.r, "Compound-symmetry correlation override");
  bench->add_option("--lambda-draws", be.lambda_draws, "Permutations drawn per lambda");
  bench->add_option("--eps", be.eps, "Outer KKT tolerance");
  bench->add_option("--eps-tilde", be.eps_tilde, "Restricted subproblem tolerance");
  bench->add_option("--m-add", be.m_add, "Coordinates added per sieve round (0 = p/100)");
  bench->add_option("--m-cap", be.m_cap, "Cap on additions per round (0 = p/40)");
  bench->add_flag("--no-sieve", be.no_sieve, "Solve on all coordinates from the start");
  bench->add_flag("--with-cr", be.with_cr, "Also solve in full space and report CR");
  bench->add_option("--out", be.out, "CSV destination instead of stdout");
  bench->add_option("--json", be.json, "Also write the rows as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (solve->parsed()) return cmd_solve(so, out, err);
    if (synth->parsed()) return cmd_synth(sy, out, err);
    if (tune->parsed()) return cmd_tune(tu, out, err);
    return cmd_bench(be, out, err);
  } catch (const ParseError& e) {
    err << "ranksieve: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    err << "ranksieve: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "ranksieve: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericFailure& e) {
    err << "ranksieve: numeric failure: " << e.what() << '\n';
    return kNumeric;
  } catch (const NonConvergence& e) {
    err << "ranksieve: " << e.what() << '\n';
    return kNumeric;
  }
}

}  // namespace ranksieve::cli
