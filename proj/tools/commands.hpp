#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ibap::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kInfeasible = 2,
  kHypothesis = 3,
  kParse = 4,
};

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Default iteration tolerance, honouring IBAP_DEFAULT_TOL when set.
double default_tol();

}  // namespace ibap::cli
