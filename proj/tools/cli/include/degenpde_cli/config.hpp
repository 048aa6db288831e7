#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <degenpde/params.hpp>
#include <degenpde/solver.hpp>

namespace degenpde::cli {

enum class Command { analyze, profile, solve, verify };

const char* to_string(Command c);

struct RunConfig {
    ProblemParams problem;
    SolverConfig solver;
    ValidationOptions validation;
    std::string output_dir = ".";
    Command command = Command::analyze;
    std::uint64_t seed = 1;
    int lemma_trials = 20;
    /// Scale of the initial data for the comparison check.
    double comparison_rho = 0.5;
};

/// Malformed line (line >= 1) or a constraint violation (line 0).
class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, const std::string& message);
    int line() const { return line_; }

private:
    int line_;
};

/// Line-oriented `key = value` text; `#` starts a comment. k, m and p are
/// required, everything else has a default. Unknown keys are errors.
RunConfig parse_config(std::string_view text);

RunConfig load_config(const std::string& path);

}  // namespace degenpde::cli
