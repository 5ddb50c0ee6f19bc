#include "shooting.hpp"

#include <cmath>
#include <sstream>

namespace phibvp {

namespace detail {

namespace {

// Regula falsi with the Illinois safeguard on a sign-change bracket;
// stops at |s| <= tol or when the interval is exhausted.
void refine_bracket(const std::function<double(double)>& eval, double a, double fa, double b,
                    double fb, double tol, SweepSelection& sel) {
    sel.nu = std::fabs(fa) < std::fabs(fb) ? a : b;
    sel.s = std::fabs(fa) < std::fabs(fb) ? fa : fb;
    for (int it = 0; it < 200; ++it) {
        double x = fb != fa ? (a * fb - b * fa) / (fb - fa) : 0.5 * (a + b);
        if (!(x > std::fmin(a, b) && x < std::fmax(a, b))) x = 0.5 * (a + b);
        if (x == a || x == b) break;
        const double fx = eval(x);
        if (std::fabs(fx) < std::fabs(sel.s)) {
            sel.nu = x;
            sel.s = fx;
        }
        if (std::fabs(fx) <= tol) {
            sel.found = true;
            return;
        }
        if (fx * fb < 0.0) {
            a = b;
            fa = fb;
        } else {
            fa *= 0.5;
        }
        b = x;
        fb = fx;
    }
    sel.found = std::fabs(sel.s) <= tol;
}

}  // namespace

SweepSelection sweep_and_bisect(const std::function<double(double)>& eval, double lo, double hi,
                                int grid_points, double tol, bool full_scan) {
    SweepSelection sel;
    const int g = std::max(grid_points, 2);
    const auto grid_nu = [&](int j) { return lo + (hi - lo) * static_cast<double>(j) / (g - 1); };

    // Right-to-left scan: the first event found is the rightmost one.
    std::vector<std::pair<double, double>> scanned;  // right-to-left order
    scanned.reserve(static_cast<std::size_t>(g));
    int event = -1;  // index of the within-tol hit or left edge of a crossing
    bool event_is_crossing = false;
    for (int j = g - 1; j >= 0; --j) {
        const double nu = grid_nu(j);
        const double s = eval(nu);
        scanned.emplace_back(nu, s);
        if (event < 0) {
            if (std::fabs(s) <= tol) {
                event = j;
            } else if (j + 1 <= g - 1) {
                const double s_right = scanned[scanned.size() - 2].second;
                if (s * s_right < 0.0) {
                    event = j;
                    event_is_crossing = true;
                }
            }
            if (event >= 0 && !full_scan) break;
        }
    }
    sel.profile.assign(scanned.rbegin(), scanned.rend());

    if (event < 0) return sel;  // constant sign everywhere: no selection
    const double nu_j = grid_nu(event);
    const double s_at = [&] {
        for (const auto& [nu, s] : scanned)
            if (nu == nu_j) return s;
        return eval(nu_j);
    }();
    if (!event_is_crossing) {
        sel.found = true;
        sel.nu = nu_j;
        sel.s = s_at;
        return sel;
    }
    const double nu_r = grid_nu(event + 1);
    const double s_r = [&] {
        for (const auto& [nu, s] : scanned)
            if (nu == nu_r) return s;
        return eval(nu_r);
    }();
    refine_bracket(eval, nu_j, s_at, nu_r, s_r, tol, sel);
    return sel;
}

}  // namespace detail

namespace {

/// Endpoint data of a solved path under the original coefficient.
struct EndpointData {
    double u, v, w, z;  // x(0), x(T), flux(0), flux(T)
};

EndpointData endpoint_data(const DiscretePath& path, const OdeModel& plain_model) {
    DiscretePath tmp = path;
    tmp.ax_values = compute_Ax(path, plain_model);
    return {path.start(), path.end(), flux_at_start(tmp), flux_at_end(tmp)};
}

/// Dirichlet subproblem runner with warm starts across nearby nu's.
class InnerSolver {
public:
    InnerSolver(BvpProblem dirichlet_prob, std::shared_ptr<const OdeModel> plain_model,
                std::shared_ptr<const Mesh> mesh, const SolveOptions& opts)
        : prob_(std::move(dirichlet_prob)),
          plain_model_(std::move(plain_model)),
          mesh_(std::move(mesh)),
          opts_(opts) {}

    SolveResult solve(double nu1, double nu2) {
        prob_.boundary = BoundarySpec::dirichlet(nu1, nu2);
        DiscretePath x0 = initial_path(nu1, nu2);
        SolveResult res = fixed_point_solve(prob_, mesh_, x0, opts_);
        if (res.status == SolveStatus::NoConvergence)
            throw NumericError("inner Dirichlet solve failed to converge at nu1=" +
                               std::to_string(nu1) + ", nu2=" + std::to_string(nu2) + ": " +
                               res.message);
        warm_ = res.path;
        return res;
    }

    EndpointData endpoints(const SolveResult& res) const {
        return endpoint_data(res.path, *plain_model_);
    }

private:
    DiscretePath initial_path(double nu1, double nu2) {
        const CoeffFn a = prob_.model->coeff_fn();
        if (!warm_) return linear_path(mesh_, nu1, nu2, a);
        // shift the previous solution linearly onto the new endpoints
        std::vector<double> vals = warm_->node_values;
        const double d0 = nu1 - vals.front();
        const double dT = nu2 - vals.back();
        const double T = mesh_->T();
        for (std::size_t i = 0; i < vals.size(); ++i) {
            const double s = mesh_->node(i) / T;
            vals[i] += d0 * (1.0 - s) + dT * s;
        }
        return make_path(mesh_, std::move(vals), a);
    }

    BvpProblem prob_;
    std::shared_ptr<const OdeModel> plain_model_;
    std::shared_ptr<const Mesh> mesh_;
    SolveOptions opts_;
    std::optional<DiscretePath> warm_;
};

/// Shared setup: bounds (when growth data is available) and the
/// Dirichlet subproblem (truncated when requested and possible).
struct Engine {
    std::optional<AprioriBounds> bounds;
    std::shared_ptr<const OdeModel> plain_model;
    InnerSolver solver;

    Engine(const BvpProblem& prob, const LowerUpperPair& pair, std::shared_ptr<const Mesh> mesh,
           const SolveOptions& opts)
        : plain_model(prob.model),
          solver(make_subproblem(prob, pair, mesh, opts, bounds), prob.model, mesh, opts) {}

private:
    static BvpProblem make_subproblem(const BvpProblem& prob, const LowerUpperPair& pair,
                                      const std::shared_ptr<const Mesh>& mesh,
                                      const SolveOptions& opts,
                                      std::optional<AprioriBounds>& bounds) {
        BvpProblem sub = prob;
        sub.boundary = BoundarySpec::dirichlet(0.0, 0.0);
        if (prob.nagumo) bounds = compute_apriori_bounds(prob, pair, *mesh);
        if (opts.truncation && bounds) {
            BvpProblem dirichlet = sub;
            return build_truncated(dirichlet, pair, *bounds);
        }
        return sub;
    }
};

void require(bool ok, const std::string& hypothesis) {
    if (!ok) throw Error("boundary hypothesis failed: " + hypothesis);
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

FunctionalBc make_functional_bc(const BoundarySpec& bc) {
    FunctionalBc out;
    switch (bc.kind) {
        case BoundarySpec::Kind::Functional: {
            const Expression g = *bc.g;
            const Expression rho = *bc.rho;
            out.g = [g](double u, double v, double w, double z) {
                const double vals[4] = {u, v, w, z};
                return g.eval(vals);
            };
            out.rho = [rho](double r) {
                const double vals[1] = {r};
                return rho.eval(vals);
            };
            break;
        }
        case BoundarySpec::Kind::Periodic:
            out.g = [](double, double, double w, double z) { return w - z; };
            out.rho = [](double r) { return r; };
            break;
        default:
            throw Error("boundary kind is not functional");
    }
    return out;
}

struct SeparatedBc {
    std::function<double(double, double)> p;
    std::function<double(double, double)> q;
};

SeparatedBc make_separated_bc(const BoundarySpec& bc) {
    SeparatedBc out;
    switch (bc.kind) {
        case BoundarySpec::Kind::Separated: {
            const Expression p = *bc.p;
            const Expression q = *bc.q;
            out.p = [p](double s, double w) {
                const double vals[2] = {s, w};
                return p.eval(vals);
            };
            out.q = [q](double s, double w) {
                const double vals[2] = {s, w};
                return q.eval(vals);
            };
            break;
        }
        case BoundarySpec::Kind::SturmLiouville:
            out.p = [l1 = bc.l1, m1 = bc.m1, nu1 = bc.nu1](double s, double w) {
                return l1 * s + m1 * w - nu1;
            };
            out.q = [l2 = bc.l2, m2 = bc.m2, nu2 = bc.nu2](double s, double w) {
                return l2 * s - m2 * w - nu2;
            };
            break;
        case BoundarySpec::Kind::Neumann:
            out.p = [nu1 = bc.nu1](double, double w) { return w - nu1; };
            out.q = [nu2 = bc.nu2](double, double w) { return nu2 - w; };
            break;
        default:
            throw Error("boundary kind is not separated");
    }
    return out;
}

void append_check(SolveResult& res, const std::string& name, double value, double tol,
                  const std::string& detail) {
    InvariantCheck c;
    c.name = name;
    c.worst = value;
    c.pass = std::fabs(value) <= tol;
    c.detail = detail;
    res.report.invariant_checks.push_back(c);
}

SolveResult run_functional(const BvpProblem& prob, const LowerUpperPair& pair,
                           std::shared_ptr<const Mesh> mesh, const SolveOptions& opts,
                           const FunctionalBc& bc) {
    const double scale = 1.0 + std::fabs(pair.alpha.start()) + std::fabs(pair.beta.start());
    const double htol = std::fmax(opts.bc_tol, 1e-9 * scale);

    const EndpointData da = endpoint_data(pair.alpha, *prob.model);
    const EndpointData db = endpoint_data(pair.beta, *prob.model);
    require(bc.g(da.u, da.v, da.w, da.z) >= -htol,
            "g at the lower-solution data must be >= 0 (got " +
                fmt(bc.g(da.u, da.v, da.w, da.z)) + ")");
    require(bc.g(db.u, db.v, db.w, db.z) <= htol,
            "g at the upper-solution data must be <= 0 (got " +
                fmt(bc.g(db.u, db.v, db.w, db.z)) + ")");
    require(std::fabs(da.v - bc.rho(da.u)) <= htol, "alpha(T) must equal rho(alpha(0))");
    require(std::fabs(db.v - bc.rho(db.u)) <= htol, "beta(T) must equal rho(beta(0))");

    Engine engine(prob, pair, mesh, opts);
    SolveResult last;
    const auto eval_s = [&](double nu) {
        last = engine.solver.solve(nu, bc.rho(nu));
        const EndpointData d = engine.solver.endpoints(last);
        return bc.g(d.u, d.v, d.w, d.z);
    };

    detail::SweepSelection sel =
        detail::sweep_and_bisect(eval_s, pair.alpha.start(), pair.beta.start(), opts.nu_grid,
                                 opts.bc_tol, opts.scan_full_grid);
    SolveResult res;
    if (!sel.found) {
        // return the best grid point anyway so callers can inspect it
        double best_s = std::numeric_limits<double>::infinity();
        double best_nu = pair.alpha.start();
        for (const auto& [nu, s] : sel.profile)
            if (std::fabs(s) < std::fabs(best_s)) {
                best_s = s;
                best_nu = nu;
            }
        eval_s(best_nu);
        res = std::move(last);
        res.status = SolveStatus::NoSignChange;
        res.message = "boundary score has no sign change on the scanned grid";
        res.shooting_nu = best_nu;
    } else {
        const double s_final = eval_s(sel.nu);  // warm-started re-solve at the accepted nu
        res = std::move(last);
        res.shooting_nu = sel.nu;
        append_check(res, "boundary_functional_residual", s_final, opts.bc_tol,
                     "g at the returned solution");
        const EndpointData d = engine.solver.endpoints(res);
        append_check(res, "boundary_rho_match", d.v - bc.rho(d.u),
                     opts.bc_tol + 10.0 * opts.xi_tol, "x(T) - rho(x(0))");
    }
    res.sweep_profile = std::move(sel.profile);
    res.report.apriori = engine.bounds;
    return res;
}

}  // namespace

SolveResult shoot_functional(const BvpProblem& prob, const LowerUpperPair& pair,
                             std::shared_ptr<const Mesh> mesh, const SolveOptions& opts) {
    return run_functional(prob, pair, std::move(mesh), opts, make_functional_bc(prob.boundary));
}

SolveResult solve_periodic(const BvpProblem& prob, const LowerUpperPair& pair,
                           std::shared_ptr<const Mesh> mesh, const SolveOptions& opts) {
    const double scale = 1.0 + std::fabs(pair.alpha.start()) + std::fabs(pair.beta.start());
    const double htol = std::fmax(opts.bc_tol, 1e-9 * scale);
    const EndpointData da = endpoint_data(pair.alpha, *prob.model);
    const EndpointData db = endpoint_data(pair.beta, *prob.model);
    require(std::fabs(da.u - da.v) <= htol, "periodic pair needs alpha(0) = alpha(T)");
    require(da.w >= da.z - htol,
            "periodic pair needs flux(alpha)(0) >= flux(alpha)(T) (got " + fmt(da.w) + " < " +
                fmt(da.z) + ")");
    require(std::fabs(db.u - db.v) <= htol, "periodic pair needs beta(0) = beta(T)");
    require(db.w <= db.z + htol, "periodic pair needs flux(beta)(0) <= flux(beta)(T)");

    FunctionalBc bc;
    bc.g = [](double, double, double w, double z) { return w - z; };
    bc.rho = [](double r) { return r; };
    SolveResult res = run_functional(prob, pair, std::move(mesh), opts, bc);
    if (res.status == SolveStatus::Converged) {
        append_check(res, "periodic_value_match", res.path.start() - res.path.end(),
                     opts.bc_tol + 10.0 * opts.xi_tol, "x(0) - x(T)");
    }
    return res;
}

SolveResult solve_separated(const BvpProblem& prob, const LowerUpperPair& pair,
                            std::shared_ptr<const Mesh> mesh, const SolveOptions& opts) {
    const BoundarySpec& bspec = prob.boundary;

    // Sturm-Liouville with m1 = m2 = 0 is plain Dirichlet data.
    if (bspec.kind == BoundarySpec::Kind::SturmLiouville && bspec.m1 == 0.0 && bspec.m2 == 0.0) {
        if (bspec.l1 == 0.0 || bspec.l2 == 0.0)
            throw Error("degenerate Sturm-Liouville data: l1, l2 must be nonzero when m1 = m2 = 0");
        Engine engine(prob, pair, mesh, opts);
        SolveResult res = engine.solver.solve(bspec.nu1 / bspec.l1, bspec.nu2 / bspec.l2);
        res.report.apriori = engine.bounds;
        res.shooting_nu = bspec.nu2 / bspec.l2;
        return res;
    }

    const SeparatedBc bc = make_separated_bc(bspec);
    const double scale = 1.0 + std::fabs(pair.alpha.start()) + std::fabs(pair.beta.start());
    const double htol = std::fmax(opts.bc_tol, 1e-9 * scale);
    const EndpointData da = endpoint_data(pair.alpha, *prob.model);
    const EndpointData db = endpoint_data(pair.beta, *prob.model);
    require(bc.p(da.u, da.w) >= -htol,
            "p at the lower-solution start data must be >= 0 (got " + fmt(bc.p(da.u, da.w)) + ")");
    require(bc.q(da.v, da.z) >= -htol,
            "q at the lower-solution end data must be >= 0 (got " + fmt(bc.q(da.v, da.z)) + ")");
    require(bc.p(db.u, db.w) <= htol,
            "p at the upper-solution start data must be <= 0 (got " + fmt(bc.p(db.u, db.w)) + ")");
    require(bc.q(db.v, db.z) <= htol,
            "q at the upper-solution end data must be <= 0 (got " + fmt(bc.q(db.v, db.z)) + ")");

    Engine engine(prob, pair, mesh, opts);
    SolveResult last;

    // Inner level: fix x(T) = nu, sweep mu = x(0) to zero p(x(0), flux(0)).
    const auto solve_inner = [&](double nu) -> double {
        const auto eval_p = [&](double mu) {
            last = engine.solver.solve(mu, nu);
            const EndpointData d = engine.solver.endpoints(last);
            return bc.p(d.u, d.w);
        };
        detail::SweepSelection sel = detail::sweep_and_bisect(
            eval_p, pair.alpha.start(), pair.beta.start(), opts.nu_grid, opts.bc_tol);  // inner stays lazy
        if (!sel.found)
            throw NumericError("inner sweep: p has no sign change over x(0) candidates at x(T)=" +
                               fmt(nu));
        eval_p(sel.nu);
        const EndpointData d = engine.solver.endpoints(last);
        return bc.q(d.v, d.z);
    };

    detail::SweepSelection outer;
    try {
        outer = detail::sweep_and_bisect(solve_inner, pair.alpha.end(), pair.beta.end(),
                                         opts.nu_grid, opts.bc_tol, opts.scan_full_grid);
    } catch (const NumericError& e) {
        SolveResult res;
        res.path = pair.alpha;
        res.status = SolveStatus::NoSignChange;
        res.message = e.what();
        res.report.apriori = engine.bounds;
        return res;
    }

    SolveResult res;
    if (!outer.found) {
        double best_s = std::numeric_limits<double>::infinity();
        double best_nu = pair.alpha.end();
        for (const auto& [nu, s] : outer.profile)
            if (std::fabs(s) < std::fabs(best_s)) {
                best_s = s;
                best_nu = nu;
            }
        solve_inner(best_nu);
        res = std::move(last);
        res.status = SolveStatus::NoSignChange;
        res.message = "outer boundary score has no sign change on the scanned grid";
        res.shooting_nu = best_nu;
    } else {
        const double q_final = solve_inner(outer.nu);
        res = std::move(last);
        res.shooting_nu = outer.nu;
        const EndpointData d = endpoint_data(res.path, *prob.model);
        append_check(res, "boundary_p_residual", bc.p(d.u, d.w), opts.bc_tol,
                     "p(x(0), flux(0)) at the returned solution");
        append_check(res, "boundary_q_residual", q_final, opts.bc_tol,
                     "q(x(T), flux(T)) at the returned solution");
    }
    res.sweep_profile = std::move(outer.profile);
    res.report.apriori = engine.bounds;
    return res;
}

SolveResult solve_with_shooting(const BvpProblem& prob, const LowerUpperPair& pair,
                                std::shared_ptr<const Mesh> mesh, const SolveOptions& opts) {
    switch (prob.boundary.kind) {
        case BoundarySpec::Kind::Functional:
            return shoot_functional(prob, pair, std::move(mesh), opts);
        case BoundarySpec::Kind::Periodic:
            return solve_periodic(prob, pair, std::move(mesh), opts);
        case BoundarySpec::Kind::SturmLiouville:
        case BoundarySpec::Kind::Neumann:
        case BoundarySpec::Kind::Separated:
            return solve_separated(prob, pair, std::move(mesh), opts);
        case BoundarySpec::Kind::Dirichlet:
            break;
    }
    throw Error("Dirichlet problems use fixed_point_solve, not the shooting layer");
}

std::vector<std::pair<double, double>> boundary_sweep(const BvpProblem& prob,
                                                      const LowerUpperPair& pair,
                                                      std::shared_ptr<const Mesh> mesh,
                                                      const SolveOptions& opts) {
    SolveOptions scan = opts;
    scan.nu_grid = std::max(opts.nu_grid, 2);
    scan.scan_full_grid = true;
    SolveResult res = solve_with_shooting(prob, pair, std::move(mesh), scan);
    return res.sweep_profile;
}

}  // namespace phibvp
