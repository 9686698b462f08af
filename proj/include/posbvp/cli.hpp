#pragma once

/// \file
/// Command-line front end: solve, verify, degree, sweep-theta, sweep-alpha,
/// export.

#include <iosfwd>
#include <optional>
#include <string>

namespace posbvp {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitNoConvergence = 2,
  kExitHypothesis = 3,
};

/// Flat run configuration; JSON config keys use the same names.
struct RunConfig {
  std::string problem = "logistic-bc1";
  std::optional<std::string> bc;
  double T = 1.0;
  int n = 1000;
  double tol = 1e-10;
  std::optional<double> r;
  std::optional<double> R;
  double alpha0 = 1.0;
  std::string v = "one";
  int theta_steps = 10;
  int alpha_steps = 10;
  std::string out = ".";
  /// Inline family parameters.
  double lambda = 1.0;
  double c = 0.0;
  double d = 1.0;
  double kappa = 1.0;
  /// Optional kernel parameter for the initial guess.
  std::optional<double> guess;
};

/// Parses argv (argv[0] is the program name), runs the command and returns
/// the exit code. Reports go to files under `out`; summaries go to `out_stream`,
/// diagnostics to `err_stream`.
int run_cli(int argc, const char* const* argv, std::ostream& out_stream,
            std::ostream& err_stream);

}  // namespace posbvp
