#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "ranksieve/model.hpp"

namespace ranksieve::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,    // bad flags, unreadable or malformed input
  kNumeric = 3,  // solver failed to converge or hit NaN/Inf
};

/// Raised for flag combinations the parser accepts but the command cannot use.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolveOptions {
  std::string matrix;
  std::string response;
  std::string lambda = "auto";  // "auto" or a positive number
  std::string loss = "rank";
  double eps = 1e-6;
  double eps_tilde = 9e-7;
  Index m_add = 0;
  Index m_cap = 0;
  bool no_sieve = false;
  bool reference = false;
  double reference_tol = 1e-8;
  int reference_max_iter = 200000;
  std::uint64_t seed = 0;  // seed of the lambda simulation
  int lambda_draws = 1000;
  std::string trace;  // per-round CSV, empty = none
  std::string out;    // report JSON, empty = stdout
};

struct SynthOptions {
  std::string experiment = "E1";
  Index n = 100;
  Index p = 400;
  std::uint64_t seed = 1;
  std::string error;              // empty = experiment default
  std::optional<double> r;        // compound-symmetry correlation override
  std::string lambda = "auto";    // "auto" or a positive number
  int lambda_draws = 1000;
  std::string format = "csv";     // csv | rsmx
  std::string out_dir;
};

struct TuneOptions {
  std::string matrix;  // required for the rank loss
  std::string loss = "rank";
  Index n = 0;         // sqrt loss without a matrix
  double c = 1.1;
  double alpha0 = 0.1;
  int draws = 1000;
  std::uint64_t seed = 0;
};

struct BenchOptions {
  std::string experiment = "E2";
  Index n = 200;
  Index p = 1000;
  int reps = 10;
  std::uint64_t seed = 1;  // replication i uses seed + i
  std::string error;
  std::optional<double> r;
  int lambda_draws = 1000;
  double eps = 1e-6;
  double eps_tilde = 9e-7;
  Index m_add = 0;
  Index m_cap = 0;
  bool no_sieve = false;
  bool with_cr = false;
  std::string out;   // CSV, empty = stdout
  std::string json;  // optional JSON copy of the rows
};

int cmd_solve(const SolveOptions& o, std::ostream& out, std::ostream& err);
int cmd_synth(const SynthOptions& o, std::ostream& out, std::ostream& err);
int cmd_tune(const TuneOptions& o, std::ostream& out, std::ostream& err);
int cmd_bench(const BenchOptions& o, std::ostream& out, std::ostream& err);

/// Full command line: parses, dispatches, maps every failure to an exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Worker count for bench: hardware threads, capped by RANKSIEVE_THREADS.
int worker_threads(int jobs);

}  // namespace ranksieve::cli
