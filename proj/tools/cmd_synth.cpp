#include <filesystem>
#include <fstream>
#include <iostream>

#include "commands.hpp"
#include "matrix_io.hpp"
#include "ranksieve/synth.hpp"
#include "report_json.hpp"

namespace ranksieve::cli {

int cmd_synth(const SynthOptions& o, std::ostream& out, std::ostream&) {
  if (o.out_dir.empty()) throw UsageError("--out-dir is required");
  if (o.format != "csv" && o.format != "rsmx") throw UsageError("--format must be csv or rsmx");

  std::optional<ErrorSpec> error;
  if (!o.error.empty()) error = parse_error(o.error);
  SynthSpec spec = experiment_spec(parse_experiment(o.experiment), o.n, o.p, o.seed, error, o.r);
  spec.lambda_draws = o.lambda_draws;
  if (o.lambda != "auto") {
    try {
      std::size_t used = 0;
      spec.lambda = std::stod(o.lambda, &used);
      if (used != o.lambda.size() || !(spec.lambda > 0)) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw UsageError("--lambda must be 'auto' or a positive number, got '" + o.lambda + "'");
    }
  }
  spec.validate();
  const Instance inst = generate(spec);

  const std::filesystem::path dir(o.out_dir);
  std::filesystem::create_directories(dir);
  const std::string x_name = o.format == "csv" ? "X.csv" : "X.rsmx";
  if (o.format == "csv")
    write_matrix_csv(dir / x_name, inst.data.A());
  else
    write_matrix_rsmx(dir / x_name, inst.data.A());
  write_vector_csv(dir / "b.csv", inst.data.b());
  write_vector_csv(dir / "x_true.csv", inst.x_true);

  nlohmann::json j = spec_json(inst.spec, inst.data.lambda());
  j["files"] = {{"matrix", x_name}, {"response", "b.csv"}, {"x_true", "x_true.csv"}};
  j["true_nonzeros"] = (inst.x_true.array() != 0).count();
  std::ofstream f(dir / "spec.json", std::ios::trunc);
  if (!f) throw UsageError("cannot write " + (dir / "spec.json").string());
  f << j.dump(2) << '\n';
  out << (dir / "spec.json").string() << '\n';
  return kOk;
}

}  // namespace ranksieve::cli
