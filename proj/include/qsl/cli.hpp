#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qsl {

enum ExitCode : int { kExitOk = 0, kExitVerifyFailed = 1, kExitUsage = 2, kExitIo = 3 };

struct CheckResult {
  std::string name;
  bool pass = false;
  double error = 0.0;  // measured deviation, or the margin for oracle checks
  std::string detail;
};

// Names accepted by `verify --only`.
std::vector<std::string> verify_check_names();

// oracle_dims empty means d = 2..7.
std::vector<CheckResult> run_verify_check(const std::string& name, double tol,
                                          const std::vector<std::size_t>& oracle_dims);

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qsl
