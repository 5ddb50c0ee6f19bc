#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace phibvp {

/// Process-level outcome; values double as CLI exit codes.
enum class RunStatus : int {
    Ok = 0,
    UsageError = 1,        // I/O, parse, malformed request
    ValidationFailed = 2,  // a hypothesis audit or precondition failed
    SolverFailed = 3,      // no convergence / no sign change (artifacts still emitted)
};

struct RunOutput {
    RunStatus status = RunStatus::Ok;
    std::string message;
    std::string report_json;   // full JSON report ("schema": 1)
    std::string solution_csv;  // solve command
    std::string profile_csv;   // sweep command (and shooting solves)
    std::vector<double> t_nodes;
    std::vector<double> x_nodes;
    bool converged = false;
};

/// Runs one of the commands solve | verify | bounds | sweep against a
/// loaded problem. Parse/load errors are thrown by the config layer
/// before this point; everything here reports through RunOutput.
RunOutput run_command(const LoadedProblem& lp, const std::string& command);

}  // namespace phibvp
