#include "driver.hpp"

#include <cmath>

#include "json.hpp"
#include "report.hpp"
#include "shooting.hpp"

namespace phibvp {

namespace {

using Json = nlohmann::ordered_json;

Json validation_json(const ValidationReport& report) {
    Json items = Json::array();
    for (const auto& it : report.items) {
        Json j;
        j["name"] = it.name;
        j["pass"] = it.pass;
        j["worst"] = it.worst;
        if (!it.witness.empty()) j["witness"] = it.witness;
        items.push_back(std::move(j));
    }
    Json out;
    out["pass"] = report.all_pass();
    out["items"] = std::move(items);
    return out;
}

Json checks_json(const std::vector<InvariantCheck>& checks) {
    Json arr = Json::array();
    for (const auto& c : checks) {
        Json j;
        j["name"] = c.name;
        j["pass"] = c.pass;
        j["worst"] = c.worst;
        if (!c.detail.empty()) j["detail"] = c.detail;
        arr.push_back(std::move(j));
    }
    return arr;
}

Json bounds_json(const AprioriBounds& b) {
    Json j;
    j["M"] = b.M;
    j["a0"] = b.a0;
    j["N"] = b.N;
    j["L_M"] = b.L_M;
    double g0 = 0.0, gh = 0.0;
    for (double v : b.gamma0.values) g0 = std::fmax(g0, v);
    for (double v : b.gamma_hat.values) gh = std::fmax(gh, v);
    j["gamma0_max"] = g0;
    j["gamma_hat_max"] = gh;
    return j;
}

Json problem_json(const LoadedProblem& lp) {
    Json j;
    j["T"] = lp.problem.T;
    j["phi"] = lp.problem.phi.describe();
    j["boundary"] = lp.problem.boundary.kind_name();
    j["coefficient_p"] = lp.problem.coeff.p;
    j["mesh_cells"] = lp.mesh->cells();
    j["has_pair"] = lp.problem.has_pair();
    j["has_growth_data"] = lp.problem.nagumo.has_value();
    return j;
}

Json report_json_for(const SolveResult& res, bool truncated, double residual_original) {
    Json j;
    j["status"] = to_string(res.status);
    if (!res.message.empty()) j["message"] = res.message;
    j["iterations"] = res.report.iterations;
    j["final_fp_distance"] = res.report.final_fp_distance;
    j["residual_l1"] = res.report.residual_l1;
    if (truncated) j["residual_l1_original"] = residual_original;
    j["truncated"] = truncated;
    j["c0_bound"] = res.report.c0_bound;
    j["xi_history"] = res.report.xi_history;
    j["invariant_checks"] = checks_json(res.report.invariant_checks);
    if (!res.sweep_profile.empty()) {
        j["shooting_nu"] = res.shooting_nu;
        Json prof = Json::array();
        for (const auto& [nu, s] : res.sweep_profile) prof.push_back(Json::array({nu, s}));
        j["sweep_profile"] = std::move(prof);
    }
    return j;
}

struct PairContext {
    LowerUpperPair pair;
    double verify_tol = 0.0;
    bool lower_ok = false;
    bool upper_ok = false;

    Json to_json() const {
        Json j;
        j["alpha_residual_min"] = pair.alpha_residual;
        j["beta_residual_max"] = pair.beta_residual;
        j["alpha_is_lower_solution"] = lower_ok;
        j["beta_is_upper_solution"] = upper_ok;
        j["tolerance"] = verify_tol;
        return j;
    }
};

PairContext make_pair_context(const BvpProblem& prob, std::shared_ptr<const Mesh> mesh,
                              const SolveOptions& opts) {
    PairContext ctx;
    ctx.pair = make_lower_upper(prob, std::move(mesh));
    double scale = 1.0;
    for (double v : ctx.pair.alpha.node_values) scale = std::fmax(scale, std::fabs(v));
    for (double v : ctx.pair.beta.node_values) scale = std::fmax(scale, std::fabs(v));
    ctx.verify_tol = std::fmax(opts.bc_tol, 1e-9) * (1.0 + scale);
    ctx.lower_ok = ctx.pair.alpha_residual >= -ctx.verify_tol;
    ctx.upper_ok = ctx.pair.beta_residual <= ctx.verify_tol;
    return ctx;
}

}  // namespace

RunOutput run_command(const LoadedProblem& lp, const std::string& command) {
    RunOutput out;
    const BvpProblem& prob = lp.problem;
    const SolveOptions& opts = lp.options;

    Json root;
    root["schema"] = 1;
    root["command"] = command;
    root["problem"] = problem_json(lp);

    const auto finish = [&](RunStatus status, const std::string& message) {
        out.status = status;
        out.message = message;
        root["status_code"] = static_cast<int>(status);
        if (!message.empty()) root["message"] = message;
        out.report_json = root.dump(2);
        out.report_json += '\n';
        return out;
    };

    if (command != "solve" && command != "verify" && command != "bounds" && command != "sweep")
        return finish(RunStatus::UsageError, "unknown command '" + command + "'");

    // Hypothesis audits run for every command.
    const ValidationReport validation = validate_problem(prob, *lp.mesh);
    root["validation"] = validation_json(validation);

    const bool needs_pair = command == "verify" || command == "bounds" ||
                            prob.boundary.kind != BoundarySpec::Kind::Dirichlet;
    if (needs_pair && !prob.has_pair())
        return finish(RunStatus::ValidationFailed,
                      "this command/boundary kind requires a lower/upper pair ([pair] section)");

    std::optional<PairContext> pair_ctx;
    if (prob.has_pair()) {
        try {
            pair_ctx = make_pair_context(prob, lp.mesh, opts);
            root["pair"] = pair_ctx->to_json();
        } catch (const Error& e) {
            return finish(RunStatus::ValidationFailed,
                          std::string("pair evaluation failed: ") + e.what());
        }
    }

    if (!validation.all_pass())
        return finish(RunStatus::ValidationFailed, "hypothesis audit failed");

    if (command == "verify") {
        const bool ok = pair_ctx->lower_ok && pair_ctx->upper_ok;
        return finish(ok ? RunStatus::Ok : RunStatus::ValidationFailed,
                      ok ? "" : "declared pair is not a lower/upper solution pair");
    }

    std::optional<AprioriBounds> bounds;
    if (prob.nagumo && pair_ctx) {
        try {
            bounds = compute_apriori_bounds(prob, pair_ctx->pair, *lp.mesh);
            root["bounds"] = bounds_json(*bounds);
        } catch (const Error& e) {
            return finish(RunStatus::ValidationFailed,
                          std::string("a-priori bound computation failed: ") + e.what());
        }
    }

    if (command == "bounds") {
        if (!bounds)
            return finish(RunStatus::ValidationFailed,
                          "bounds require growth data ([nagumo]) and a [pair]");
        return finish(RunStatus::Ok, "");
    }

    if (command == "sweep") {
        if (prob.boundary.kind == BoundarySpec::Kind::Dirichlet)
            return finish(RunStatus::ValidationFailed,
                          "sweep applies to non-Dirichlet boundary kinds");
        try {
            const auto profile = boundary_sweep(prob, pair_ctx->pair, lp.mesh, opts);
            out.profile_csv = profile_csv(profile);
            Json prof = Json::array();
            for (const auto& [nu, s] : profile) prof.push_back(Json::array({nu, s}));
            root["sweep"] = {{"profile", std::move(prof)}};
            return finish(RunStatus::Ok, "");
        } catch (const NumericError& e) {
            return finish(RunStatus::SolverFailed, std::string("sweep failed: ") + e.what());
        } catch (const Error& e) {
            return finish(RunStatus::ValidationFailed, std::string("sweep failed: ") + e.what());
        }
    }

    // --- solve ---
    SolveResult result;
    bool truncated = false;
    try {
        if (prob.boundary.kind == BoundarySpec::Kind::Dirichlet) {
            BvpProblem solve_prob = prob;
            if (opts.truncation && pair_ctx && bounds) {
                solve_prob = build_truncated(prob, pair_ctx->pair, *bounds);
                truncated = true;
            }
            const DiscretePath x0 = linear_path(lp.mesh, prob.boundary.nu1, prob.boundary.nu2,
                                                solve_prob.model->coeff_fn());
            result = fixed_point_solve(solve_prob, lp.mesh, x0, opts);
            result.report.apriori = bounds;
        } else {
            result = solve_with_shooting(prob, pair_ctx->pair, lp.mesh, opts);
            truncated = opts.truncation && bounds.has_value();
        }
    } catch (const NumericError& e) {
        // numerical breakdown mid-solve (diverging inner iterations,
        // bracket blow-ups): a solver failure, not a rejected problem
        return finish(RunStatus::SolverFailed, e.what());
    } catch (const Error& e) {
        return finish(RunStatus::ValidationFailed, e.what());
    }

    if (pair_ctx && bounds) {
        auto props = check_solution_properties(result.path, pair_ctx->pair, *bounds);
        for (auto& c : props) result.report.invariant_checks.push_back(std::move(c));
    }

    const double residual_original = residual_l1(result.path, prob);
    root["solve"] = report_json_for(result, truncated, residual_original);

    out.solution_csv = solution_csv(result.path, prob);
    if (!result.sweep_profile.empty()) out.profile_csv = profile_csv(result.sweep_profile);
    out.t_nodes = result.path.mesh->nodes();
    out.x_nodes = result.path.node_values;
    out.converged = result.status == SolveStatus::Converged;

    if (result.status != SolveStatus::Converged)
        return finish(RunStatus::SolverFailed, result.message);
    return finish(RunStatus::Ok, "");
}

}  // namespace phibvp
