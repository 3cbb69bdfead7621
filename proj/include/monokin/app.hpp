/// @file app.hpp
/// @brief Subcommands behind the command-line tool.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "monokin/config.hpp"
#include "monokin/state.hpp"

namespace monokin {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitValidation = 2,
  kExitGuard = 3,
  kExitSweepMember = 4,
};

/// Command-line flags that override config values.
struct Overrides {
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::vector<double>> snapshot_times;
};

void apply_overrides(RunConfig& c, const Overrides& o);

struct RunSummary {
  std::vector<DiagnosticsRecord> diagnostics;
  int steps = 0;
  double dt = 0.0;
};

/// Runs one scenario, writing snapshots, diagnostics.csv and run.json into
/// c.out_dir. Throws on validation errors and runtime guards.
RunSummary run_scenario(const RunConfig& c);

int cmd_run(const std::string& config_path, const Overrides& o, std::ostream& out,
            std::ostream& err);
int cmd_sweep(const std::string& plan_path, const Overrides& o, std::ostream& out,
              std::ostream& err);
int cmd_report(const std::string& dir, std::ostream& out, std::ostream& err);

/// Footer metrics and leading columns of the sweep table per scenario.
std::vector<std::string> sweep_metrics(Scenario s);
std::vector<std::string> sweep_key_columns(Scenario s);

}  // namespace monokin
