#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bounds.hpp"
#include "problem.hpp"

namespace phibvp {

struct SolveOptions {
    double tol = 1e-8;
    int max_iter = 500;
    double damping = 0.5;      // in (0, 1]
    bool anderson = false;     // Anderson acceleration, window 3
    double xi_tol = 1e-12;     // residual tolerance of the scalar xi solve
    double bc_tol = 1e-6;      // boundary-functional tolerance (shooting)
    int nu_grid = 33;          // shooting grid resolution
    bool truncation = true;    // solve the truncated problem when a pair is declared
    bool scan_full_grid = false;  // evaluate every grid point (sweep command)
};

struct InvariantCheck {
    std::string name;
    bool pass = true;
    double worst = 0.0;
    std::string detail;
};

enum class SolveStatus { Converged, NoConvergence, NoSignChange };

const char* to_string(SolveStatus s);

struct SolveReport {
    int iterations = 0;
    std::vector<double> xi_history;
    double final_fp_distance = 0.0;
    double residual_l1 = 0.0;
    std::vector<InvariantCheck> invariant_checks;
    double c0_bound = 0.0;
    std::optional<AprioriBounds> apriori;

    bool checks_pass() const {
        for (const auto& c : invariant_checks)
            if (!c.pass) return false;
        return true;
    }
};

struct SolveResult {
    DiscretePath path;
    SolveReport report;
    SolveStatus status = SolveStatus::Converged;
    std::string message;
    // shooting diagnostics: the scanned (nu, s(nu)) profile, outermost level
    std::vector<std::pair<double, double>> sweep_profile;
    double shooting_nu = 0.0;
};

/// Cumulative integral of the right-hand side along the path:
/// F(t_k) = sum_{i<k} f(mid_i, x(mid_i), x'_i) * width_i, F(0) = 0.
/// Throws NumericError naming the cell on a non-finite sample.
std::vector<double> cumulative_F(const DiscretePath& path, const OdeModel& model);
std::vector<double> cumulative_F(const DiscretePath& path, const Expression& f);

/// Solves integrate((1/a) * PhiInv(xi + F)) = delta for the unique xi.
/// a_cells must be positive at midpoints; F_nodes is node-indexed. The
/// initial bracket is Phi(delta / integral(1/a)) -+ max|F|, expanded if
/// discretization perturbs it. Returns xi with |g(xi) - delta| <= tol.
double solve_xi(const Mesh& mesh, const CellFunction& a_cells, const std::vector<double>& F_nodes,
                const Homeomorphism& phi, double delta, double tol);

/// One application of the fixed-point operator for the Dirichlet
/// problem: nu1 + cumulative sums of (1/a_i) PhiInv(xi + F(mid_i)).
DiscretePath apply_P(const DiscretePath& path, const BvpProblem& prob, double xi_tol);

/// Damped fixed-point iteration x <- (1-lambda) x + lambda P(x) until
/// the distance between x and P(x) drops below tol. Non-convergence is
/// a reported outcome carrying the best iterate, not an exception.
SolveResult fixed_point_solve(const BvpProblem& prob, std::shared_ptr<const Mesh> mesh,
                              const DiscretePath& x0, const SolveOptions& opts);

/// Cellwise flux a(mid, x(mid)) * x' under the given model.
CellFunction compute_Ax(const DiscretePath& path, const OdeModel& model);

/// L^1 norm of the ODE residual: divided differences of Phi(flux)
/// across adjacent cell midpoints against f at the interior nodes.
double residual_l1(const DiscretePath& path, const BvpProblem& prob);

/// Per-node residual values backing residual_l1 (zero at the endpoints).
std::vector<double> residual_at_nodes(const DiscretePath& path, const BvpProblem& prob);

}  // namespace phibvp
