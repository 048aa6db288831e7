#pragma once

#include <ostream>

#include "degenpde_cli/config.hpp"

namespace degenpde::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_config_error = 1,
    exit_solver_failure = 2,
    exit_verification_failure = 3,
};

/// constants.csv: name,value,branch.
int cmd_analyze(const RunConfig& config, std::ostream& log);
/// profile.csv: xi,f at 1001 samples.
int cmd_profile(const RunConfig& config, std::ostream& log);
/// snapshots.csv, front.csv, meta.csv and summary.txt.
int cmd_solve(const RunConfig& config, std::ostream& log);
/// verify.csv and verify_details.csv.
int cmd_verify(const RunConfig& config, std::ostream& log);

/// Runs config.command with the output directory created if missing.
int dispatch(const RunConfig& config, std::ostream& log);

}  // namespace degenpde::cli
