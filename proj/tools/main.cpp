// phi-bvp: command-line front end for the phibvp shared library.
//
//   phi-bvp solve  --config problem.cfg --out solution.csv --report report.json
//   phi-bvp verify --config problem.cfg --report report.json
//   phi-bvp bounds --config problem.cfg [--report report.json]
//   phi-bvp sweep  --config problem.cfg --out profile.csv [--report report.json]
//
// Exit codes: 0 success, 1 I/O or parse error, 2 hypothesis/validation
// failure, 3 solver failure (no convergence / no sign change; best
// artifacts are still written).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "phibvp/phibvp.h"

namespace {

bool write_file(const std::string& path, const char* content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::fprintf(stderr, "error: cannot write %s\n", path.c_str());
        return false;
    }
    out << content;
    return true;
}

int run(const std::string& command, const std::string& config_path, const std::string& out_path,
        const std::string& report_path) {
    char err[1024] = {0};
    phibvp_problem* problem = phibvp_problem_load(config_path.c_str(), err, sizeof err);
    if (!problem) {
        std::fprintf(stderr, "error: %s\n", err);
        return 1;
    }

    phibvp_result* result = nullptr;
    const phibvp_status status = phibvp_run(problem, command.c_str(), &result);
    int code = static_cast<int>(status);

    if (result) {
        const char* message = phibvp_result_message(result);
        if (message[0] != '\0') std::fprintf(stderr, "%s: %s\n", command.c_str(), message);

        if (!out_path.empty()) {
            const char* payload = command == "sweep" ? phibvp_result_profile_csv(result)
                                                     : phibvp_result_solution_csv(result);
            if (payload[0] != '\0') {
                if (!write_file(out_path, payload)) code = code == 0 ? 1 : code;
            } else {
                std::fprintf(stderr, "note: no %s output produced\n",
                             command == "sweep" ? "profile" : "solution");
            }
        }
        if (!report_path.empty()) {
            if (!write_file(report_path, phibvp_result_report_json(result)))
                code = code == 0 ? 1 : code;
        }
        if (command == "bounds" || (report_path.empty() && command != "solve"))
            std::fputs(phibvp_result_report_json(result), stdout);
        if (command == "solve" && status == PHIBVP_OK) {
            const size_t n = phibvp_result_num_nodes(result);
            std::fprintf(stderr, "solved on %zu nodes; converged=%d\n", n,
                         phibvp_result_converged(result));
        }
        phibvp_result_free(result);
    } else {
        std::fprintf(stderr, "error: no result produced\n");
        code = code == 0 ? 1 : code;
    }

    phibvp_problem_free(problem);
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Solver for singular strongly nonlinear second-order boundary value problems"};
    app.require_subcommand(1);

    std::string config_path, out_path, report_path;

    const auto add_common = [&](CLI::App* cmd, bool with_out) {
        cmd->add_option("--config", config_path, "problem config file")->required();
        if (with_out) cmd->add_option("--out", out_path, "output CSV path");
        cmd->add_option("--report", report_path, "JSON report path");
    };

    add_common(app.add_subcommand("solve", "solve the boundary value problem"), true);
    add_common(app.add_subcommand("verify", "check the declared lower/upper pair"), false);
    add_common(app.add_subcommand("bounds", "print the (M, a0, N, L_M) table as JSON"), false);
    add_common(app.add_subcommand("sweep", "emit the shooting score profile s(nu)"), true);

    CLI11_PARSE(app, argc, argv);

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return run(command, config_path, out_path, report_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
