#include "dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "rootfind.hpp"

namespace phibvp {

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged: return "converged";
        case SolveStatus::NoConvergence: return "no_convergence";
        case SolveStatus::NoSignChange: return "no_sign_change";
    }
    return "?";
}

namespace {

std::vector<double> accumulate_F(const DiscretePath& path, const std::vector<double>& f_cells) {
    const Mesh& m = *path.mesh;
    for (std::size_t i = 0; i < f_cells.size(); ++i)
        if (!std::isfinite(f_cells[i]))
            throw NumericError("right-hand side non-finite in cell " + std::to_string(i) +
                               " (midpoint t=" + std::to_string(m.midpoint(i)) + ")");
    std::vector<double> F(m.node_count(), 0.0);
    for (std::size_t i = 0; i < f_cells.size(); ++i) F[i + 1] = F[i] + f_cells[i] * m.width(i);
    return F;
}

double mid_F(const std::vector<double>& F_nodes, std::size_t cell) {
    return 0.5 * (F_nodes[cell] + F_nodes[cell + 1]);
}

CellFunction coeff_cells(const DiscretePath& path, const OdeModel& model) {
    const Mesh& m = *path.mesh;
    CellFunction a(m.cells());
    for (std::size_t i = 0; i < m.cells(); ++i) {
        a[i] = model.coeff(m.midpoint(i), path.midpoint_value(i));
        if (!(a[i] > 0.0))
            throw NumericError("coefficient not positive at midpoint t=" +
                               std::to_string(m.midpoint(i)) +
                               "; declare the zero as a singular point");
    }
    return a;
}

struct PStep {
    DiscretePath path;
    double xi = 0.0;
    double c0 = 0.0;  // |xi| certificate: max |Phi| on [-rho, rho] plus L1 of f
    std::vector<double> f_cells;
};

PStep apply_P_impl(const DiscretePath& path, const BvpProblem& prob, double xi_tol) {
    if (prob.boundary.kind != BoundarySpec::Kind::Dirichlet)
        throw Error("the fixed-point operator applies to Dirichlet boundary data");
    const Mesh& m = *path.mesh;
    const OdeModel& model = *prob.model;
    const double delta = prob.boundary.nu2 - prob.boundary.nu1;

    PStep step;
    model.rhs_cells(path, step.f_cells);
    const std::vector<double> F = accumulate_F(path, step.f_cells);
    const CellFunction a = coeff_cells(path, model);
    step.xi = solve_xi(m, a, F, prob.phi, delta, xi_tol);

    double inv_a_sum = 0.0;
    double f_l1 = 0.0;
    for (std::size_t i = 0; i < m.cells(); ++i) {
        inv_a_sum += m.width(i) / a[i];
        f_l1 += std::fabs(step.f_cells[i]) * m.width(i);
    }
    const double rho = std::fabs(delta) / inv_a_sum;
    step.c0 = std::fmax(std::fabs(prob.phi.eval(rho)), std::fabs(prob.phi.eval(-rho))) + f_l1;

    std::vector<double> out(m.node_count());
    out[0] = prob.boundary.nu1;
    for (std::size_t i = 0; i < m.cells(); ++i) {
        const double slope = prob.phi.invert(step.xi + mid_F(F, i)) / a[i];
        out[i + 1] = out[i] + slope * m.width(i);
    }
    step.path = make_path(path.mesh, std::move(out), model.coeff_fn());
    return step;
}

}  // namespace

std::vector<double> cumulative_F(const DiscretePath& path, const OdeModel& model) {
    std::vector<double> f_cells;
    model.rhs_cells(path, f_cells);
    return accumulate_F(path, f_cells);
}

std::vector<double> cumulative_F(const DiscretePath& path, const Expression& f) {
    const Mesh& m = *path.mesh;
    std::vector<double> f_cells(m.cells());
    for (std::size_t i = 0; i < m.cells(); ++i) {
        const double v[3] = {m.midpoint(i), path.midpoint_value(i), path.cell_derivatives[i]};
        f_cells[i] = f.eval(v);
    }
    return accumulate_F(path, f_cells);
}

double solve_xi(const Mesh& mesh, const CellFunction& a_cells, const std::vector<double>& F_nodes,
                const Homeomorphism& phi, double delta, double tol) {
    if (a_cells.size() != mesh.cells() || F_nodes.size() != mesh.node_count())
        throw Error("solve_xi: inputs do not match the mesh");
    double inv_a_sum = 0.0;
    double maxF = 0.0;
    for (std::size_t i = 0; i < mesh.cells(); ++i) {
        if (!(a_cells[i] > 0.0))
            throw NumericError("solve_xi requires positive coefficient cells");
        inv_a_sum += mesh.width(i) / a_cells[i];
        maxF = std::fmax(maxF, std::fabs(mid_F(F_nodes, i)));
    }

    const auto g = [&](double xi) {
        double sum = 0.0;
        for (std::size_t i = 0; i < mesh.cells(); ++i)
            sum += phi.invert(xi + mid_F(F_nodes, i)) * mesh.width(i) / a_cells[i];
        return sum;
    };

    // The sandwich PhiInv(xi -+ max|F|) * integral(1/a) <= g(xi) pins the
    // root inside [Phi(delta/S) - max|F|, Phi(delta/S) + max|F|].
    const double center = phi.eval(delta / inv_a_sum);
    double lo = center - maxF;
    double hi = center + maxF;
    const double pad = 1e-9 * (1.0 + std::fabs(center) + maxF);
    lo -= pad;
    hi += pad;
    const RootResult root = solve_increasing(g, delta, lo, hi, tol);
    if (std::fabs(root.residual) > tol && !root.interval_exhausted)
        throw NumericError("xi solve stalled at residual " + std::to_string(root.residual));
    return root.x;
}

DiscretePath apply_P(const DiscretePath& path, const BvpProblem& prob, double xi_tol) {
    return apply_P_impl(path, prob, xi_tol).path;
}

CellFunction compute_Ax(const DiscretePath& path, const OdeModel& model) {
    const Mesh& m = *path.mesh;
    CellFunction ax(m.cells());
    for (std::size_t i = 0; i < m.cells(); ++i)
        ax[i] = model.coeff(m.midpoint(i), path.midpoint_value(i)) * path.cell_derivatives[i];
    return ax;
}

std::vector<double> residual_at_nodes(const DiscretePath& path, const BvpProblem& prob) {
    const Mesh& m = *path.mesh;
    std::vector<double> out(m.node_count(), 0.0);
    if (m.cells() < 2) return out;

    const CellFunction ax = compute_Ax(path, *prob.model);
    std::vector<double> phi_ax(m.cells());
    for (std::size_t i = 0; i < m.cells(); ++i) phi_ax[i] = prob.phi.eval(ax[i]);

    std::vector<double> f_nodes;
    prob.model->rhs_interior_nodes(path, f_nodes);
    for (std::size_t i = 1; i + 1 < m.node_count(); ++i) {
        const double dm = m.midpoint(i) - m.midpoint(i - 1);
        const double lhs = (phi_ax[i] - phi_ax[i - 1]) / dm;
        out[i] = std::fabs(lhs - f_nodes[i - 1]);
    }
    return out;
}

double residual_l1(const DiscretePath& path, const BvpProblem& prob) {
    const Mesh& m = *path.mesh;
    const std::vector<double> res = residual_at_nodes(path, prob);
    double sum = 0.0;
    for (std::size_t i = 1; i + 1 < m.node_count(); ++i)
        sum += res[i] * (m.midpoint(i) - m.midpoint(i - 1));
    return sum;
}

namespace {

// Discrete consistency of a returned iterate: at an exact fixed point the
// divided differences of Phi(flux) across midpoints reproduce the
// width-weighted average of the adjacent right-hand-side cell samples.
InvariantCheck consistency_check(const DiscretePath& path, const BvpProblem& prob, double tol) {
    const Mesh& m = *path.mesh;
    InvariantCheck check;
    check.name = "fixed_point_consistency";
    std::vector<double> f_cells;
    prob.model->rhs_cells(path, f_cells);
    const CellFunction ax = compute_Ax(path, *prob.model);
    double l1 = 0.0;
    double f_inf = 0.0;
    for (double v : f_cells) f_inf = std::fmax(f_inf, std::fabs(v));
    for (std::size_t i = 1; i < m.cells(); ++i) {
        const double dm = m.midpoint(i) - m.midpoint(i - 1);
        const double lhs = (prob.phi.eval(ax[i]) - prob.phi.eval(ax[i - 1])) / dm;
        const double favg =
            (f_cells[i - 1] * m.width(i - 1) + f_cells[i] * m.width(i)) / (m.width(i - 1) + m.width(i));
        l1 += std::fabs(lhs - favg) * dm;
    }
    check.worst = l1;
    check.pass = l1 <= 10.0 * tol * (1.0 + f_inf);
    check.detail = "discrete flux-derivative vs cell-averaged rhs, L1";
    return check;
}

struct AndersonHistory {
    std::deque<std::vector<double>> xs;
    std::deque<std::vector<double>> gs;

    void push(const std::vector<double>& x, const std::vector<double>& g) {
        xs.push_back(x);
        gs.push_back(g);
        if (xs.size() > 3) {
            xs.pop_front();
            gs.pop_front();
        }
    }

    // Returns the accelerated iterate, or an empty vector when the
    // least-squares step is degenerate.
    std::vector<double> mix(double damping) const {
        const std::size_t h = xs.size();
        if (h < 2) return {};
        const std::size_t n = xs.back().size();
        const std::size_t m = h - 1;  // difference columns (<= 2)
        std::vector<std::vector<double>> dR(m, std::vector<double>(n));
        std::vector<double> rk(n);
        for (std::size_t i = 0; i < n; ++i) rk[i] = gs.back()[i] - xs.back()[i];
        for (std::size_t c = 0; c < m; ++c)
            for (std::size_t i = 0; i < n; ++i)
                dR[c][i] = (gs[c + 1][i] - xs[c + 1][i]) - (gs[c][i] - xs[c][i]);

        // normal equations (m x m, m <= 2) with a small ridge
        double A[2][2] = {{0, 0}, {0, 0}};
        double b[2] = {0, 0};
        for (std::size_t c = 0; c < m; ++c) {
            for (std::size_t d = 0; d < m; ++d)
                for (std::size_t i = 0; i < n; ++i) A[c][d] += dR[c][i] * dR[d][i];
            for (std::size_t i = 0; i < n; ++i) b[c] += dR[c][i] * rk[i];
        }
        const double ridge = 1e-12 * (A[0][0] + (m > 1 ? A[1][1] : 0.0)) + 1e-300;
        for (std::size_t c = 0; c < m; ++c) A[c][c] += ridge;
        double gamma[2] = {0, 0};
        if (m == 1) {
            gamma[0] = b[0] / A[0][0];
        } else {
            const double det = A[0][0] * A[1][1] - A[0][1] * A[1][0];
            if (det == 0.0 || !std::isfinite(det)) return {};
            gamma[0] = (b[0] * A[1][1] - b[1] * A[0][1]) / det;
            gamma[1] = (A[0][0] * b[1] - A[1][0] * b[0]) / det;
        }

        // gamma weights translate into an affine combination over history
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i) {
            double x_mix = xs.back()[i];
            double g_mix = gs.back()[i];
            for (std::size_t c = 0; c < m; ++c) {
                x_mix -= gamma[c] * (xs[c + 1][i] - xs[c][i]);
                g_mix -= gamma[c] * (gs[c + 1][i] - gs[c][i]);
            }
            out[i] = (1.0 - damping) * x_mix + damping * g_mix;
            if (!std::isfinite(out[i])) return {};
        }
        return out;
    }
};

}  // namespace

SolveResult fixed_point_solve(const BvpProblem& prob, std::shared_ptr<const Mesh> mesh,
                              const DiscretePath& x0, const SolveOptions& opts) {
    if (prob.boundary.kind != BoundarySpec::Kind::Dirichlet)
        throw Error("fixed_point_solve handles Dirichlet boundary data; use the shooting entry "
                    "points for other kinds");
    if (!(opts.damping > 0.0 && opts.damping <= 1.0)) throw Error("damping must lie in (0, 1]");
    const double bc_scale = 1.0 + std::fabs(prob.boundary.nu1) + std::fabs(prob.boundary.nu2);
    if (std::fabs(x0.start() - prob.boundary.nu1) > 1e-9 * bc_scale ||
        std::fabs(x0.end() - prob.boundary.nu2) > 1e-9 * bc_scale)
        throw Error("initial iterate does not satisfy the boundary values");

    SolveResult result;
    SolveReport& report = result.report;

    DiscretePath x = x0;
    DiscretePath best;
    double best_distance = std::numeric_limits<double>::infinity();
    double worst_c0_margin = std::numeric_limits<double>::infinity();
    double last_c0 = 0.0;
    AndersonHistory history;
    bool converged = false;

    for (int it = 0; it < opts.max_iter; ++it) {
        PStep step = apply_P_impl(x, prob, opts.xi_tol);
        report.xi_history.push_back(step.xi);
        last_c0 = step.c0;
        worst_c0_margin = std::fmin(worst_c0_margin, step.c0 - std::fabs(step.xi));
        const double d = path_distance(x, step.path);
        report.iterations = it + 1;
        report.final_fp_distance = d;
        if (d < best_distance) {
            best_distance = d;
            best = step.path;
        }
        if (d <= opts.tol) {
            x = std::move(step.path);
            converged = true;
            break;
        }

        std::vector<double> next;
        if (opts.anderson) {
            history.push(x.node_values, step.path.node_values);
            next = history.mix(opts.damping);
        }
        if (next.empty()) {
            next.resize(x.node_values.size());
            for (std::size_t i = 0; i < next.size(); ++i)
                next[i] = (1.0 - opts.damping) * x.node_values[i] +
                          opts.damping * step.path.node_values[i];
        }
        x = make_path(mesh, std::move(next), prob.model->coeff_fn());
    }

    if (!converged) {
        result.status = SolveStatus::NoConvergence;
        result.message = "fixed-point iteration did not reach tol " + std::to_string(opts.tol) +
                         " in " + std::to_string(report.iterations) +
                         " iterations (best distance " + std::to_string(best_distance) + ")";
        x = best.node_values.empty() ? x : best;
        report.final_fp_distance = best_distance;
    }

    result.path = std::move(x);
    report.c0_bound = last_c0;
    report.residual_l1 = residual_l1(result.path, prob);

    {
        InvariantCheck check;
        check.name = "xi_within_certificate";
        check.worst = worst_c0_margin;
        check.pass = worst_c0_margin >= -1e-9 * (1.0 + last_c0);
        check.detail = "certificate minus |xi|, minimum over iterations";
        report.invariant_checks.push_back(std::move(check));
    }
    {
        const CellFunction a = coeff_cells(result.path, *prob.model);
        double inv_a_sum = 0.0;
        for (std::size_t i = 0; i < mesh->cells(); ++i) inv_a_sum += mesh->width(i) / a[i];
        InvariantCheck check;
        check.name = "endpoint_exactness";
        check.worst = std::fabs(result.path.end() - prob.boundary.nu2);
        check.pass = check.worst <= opts.xi_tol * (1.0 + inv_a_sum) + 1e-12 * bc_scale;
        check.detail = "|x(T) - nu2| against the xi tolerance";
        report.invariant_checks.push_back(std::move(check));
    }
    if (converged)
        report.invariant_checks.push_back(consistency_check(result.path, prob, opts.tol));

    return result;
}

}  // namespace phibvp
