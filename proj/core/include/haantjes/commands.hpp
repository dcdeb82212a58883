#pragma once

// Command implementations behind the CLI. They write to the given streams and
// return the process exit code:
//   0 pass, 1 fail, 2 manifest error (including CFL violations), 3 internal error.

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "haantjes/pipeline.hpp"

namespace haantjes {

enum ExitCode { kExitPass = 0, kExitFail = 1, kExitManifest = 2, kExitInternal = 3 };

struct CheckCommand {
  std::string manifest;
  CheckOptions options;
  std::string report_path;  // JSON report; "-" for stdout
  bool timing = false;
};
int cmd_check(const CheckCommand& cmd, std::ostream& out, std::ostream& err);

struct TorsionCommand {
  std::string manifest;
  std::string field;
  std::string kind = "nijenhuis";  // nijenhuis | haantjes | yano-ako
  std::optional<std::vector<double>> at;
  bool enforce_pre = false;
  std::optional<double> tol;
};
int cmd_torsion(const TorsionCommand& cmd, std::ostream& out, std::ostream& err);

struct SimulateCommand {
  std::string manifest;
  int flow = 2;
  int grid = 256;
  double dt = 1e-3;
  int steps = 1000;
  int every = 0;  // sampling interval; 0 means steps / 10
  std::string out_path;  // CSV; empty for stdout
  std::optional<std::pair<int, int>> pair;
  std::string spatial = "";  // cd4 | fourier; default cd4 for flows, fourier for pairs
};
int cmd_simulate(const SimulateCommand& cmd, std::ostream& out, std::ostream& err);

int cmd_scenarios(std::ostream& out);

}  // namespace haantjes
