#include <iostream>

#include "commands.hpp"
#include "matrix_io.hpp"
#include "ranksieve/tuning.hpp"
#include "report_json.hpp"

namespace ranksieve::cli {

int cmd_tune(const TuneOptions& o, std::ostream& out, std::ostream&) {
  const Loss loss = parse_loss(o.loss);
  nlohmann::json j;
  j["loss"] = std::string(to_string(loss));
  if (loss == Loss::EuclideanNorm) {
    Index n = o.n;
    if (!o.matrix.empty()) n = read_matrix(o.matrix).rows();
    if (n < 1) throw UsageError("sqrt loss needs a matrix file or --n");
    j["n"] = n;
    j["lambda"] = sqrt_lasso_lambda(n);
  } else {
    if (o.matrix.empty()) throw UsageError("rank loss needs a matrix file");
    const Matrix X = read_matrix(o.matrix);
    LambdaSpec ls{o.c, o.alpha0, o.draws, o.seed};
    ls.validate();
    if (X.rows() < 2) throw UsageError("rank loss needs at least two samples");
    j["n"] = X.rows();
    j["p"] = X.cols();
    j["c"] = o.c;
    j["alpha0"] = o.alpha0;
    j["draws"] = o.draws;
    j["seed"] = o.seed;
    j["lambda"] = rank_lambda(X, ls);
  }
  out << j.dump(2) << '\n';
  return kOk;
}

}  // namespace ranksieve::cli
