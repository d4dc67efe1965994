#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fracphi/scaling.hpp"

namespace fracphi::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,     // reproduce: a scenario missed its threshold
  kInvalidConfig = 2,
  kNonConvergence = 3,
};

/// Runs one command line (without the program name). Results go to `out`
/// unless redirected with --out; diagnostics, warnings and JSON metadata go
/// to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Scenarios of the `reproduce` command.
struct ScenarioCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ScenarioResult {
  std::string id;
  std::vector<ScenarioCheck> checks;
  std::vector<ScalingFit> fits;
  bool pass() const;
};

/// "sunset-3/4", "sunset-2/3" or "nut-5/8".
ScenarioResult reproduce_case(const std::string& id, unsigned workers, std::uint64_t seed);

}  // namespace fracphi::cli
