// Acceptance suite: one pass/fail line per criterion, nonzero exit on
// any failure. Each criterion pins its tolerance in code.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "config.hpp"
#include "driver.hpp"
#include "expr.hpp"
#include "shooting.hpp"

using namespace phibvp;

namespace {

int failures = 0;

void criterion(int n, const std::string& what, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", n, what.c_str(),
                detail.c_str());
    if (!pass) ++failures;
}

std::string fixture(const char* name) {
    return std::string(PHIBVP_FIXTURE_DIR) + "/" + name;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double sup_error(const DiscretePath& path, const std::function<double(double)>& target) {
    double sup = 0.0;
    for (std::size_t k = 0; k < path.mesh->node_count(); ++k)
        sup = std::fmax(sup, std::fabs(path.node_values[k] - target(path.mesh->node(k))));
    return sup;
}

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), format, a, b, c);
    return buf;
}

// 1. trivial Dirichlet line at n=64: sup error <= 1e-10, under 0.1 s
void criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto lp = load_problem_file(fixture("trivial_line.cfg"));
    const auto out = run_command(lp, "solve");
    const double secs = seconds_since(t0);
    double sup = 0.0;
    for (std::size_t i = 0; i < out.t_nodes.size(); ++i)
        sup = std::fmax(sup, std::fabs(out.x_nodes[i] - out.t_nodes[i]));
    criterion(1, "trivial Dirichlet equals x(t) = t",
              out.status == RunStatus::Ok && sup <= 1e-10 && secs < 0.1,
              fmt("sup error %.3g, %.3f s", sup, secs));
}

// 2. singular closed form t^(2/3): <= 1e-3 at n=2048, error decreasing
// under two mesh doublings
void criterion2() {
    auto lp = load_problem_file(fixture("singular_t23.cfg"));
    std::vector<double> errs;
    for (std::size_t n : {2048u, 4096u, 8192u}) {
        const auto mesh = Mesh::build(1.0, {0.0}, n, 3.0);
        const auto x0 = linear_path(mesh, 0.0, 1.0, lp.problem.model->coeff_fn());
        const auto res = fixed_point_solve(lp.problem, mesh, x0, lp.options);
        if (res.status != SolveStatus::Converged) {
            criterion(2, "singular closed form t^(2/3)", false, "no convergence at n=" +
                                                                    std::to_string(n));
            return;
        }
        errs.push_back(sup_error(res.path, [](double t) { return std::pow(t, 2.0 / 3.0); }));
    }
    const bool pass = errs[0] <= 1e-3 && errs[1] < errs[0] && errs[2] < errs[1];
    criterion(2, "singular closed form t^(2/3) with monotone refinement", pass,
              fmt("sup errors %.3g / %.3g / %.3g", errs[0], errs[1], errs[2]));
}

// 3. manufactured singular r-Laplacian at n=4096: sup <= 5e-3,
// residual <= 1e-2, under 10 s
void criterion3() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto lp = load_problem_file(fixture("manufactured_rlap.cfg"));
    const auto x0 = linear_path(lp.mesh, 0.0, 0.0, lp.problem.model->coeff_fn());
    const auto res = fixed_point_solve(lp.problem, lp.mesh, x0, lp.options);
    const double secs = seconds_since(t0);
    const double sup = sup_error(res.path, [](double t) { return t * (1.0 - t); });
    const double resid = residual_l1(res.path, lp.problem);
    criterion(3, "manufactured singular r-Laplacian",
              res.status == SolveStatus::Converged && sup <= 5e-3 && resid <= 1e-2 && secs < 10.0,
              fmt("sup %.3g, residual %.3g, %.2f s", sup, resid, secs));
}

// 4. xi solver on 100 randomized instances: residual <= 1e-10 and
// agreement with a brute-force scan within one grid cell
void criterion4() {
    std::mt19937_64 rng(0xACCE57u);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const auto mesh = Mesh::build(1.0, {}, 64, 3.0);
    bool pass = true;
    double worst_res = 0.0, worst_gap = 0.0;
    for (int trial = 0; trial < 100 && pass; ++trial) {
        CellFunction a(mesh->cells());
        for (auto& v : a.values) v = std::exp(unif(rng));
        std::vector<double> F(mesh->node_count(), 0.0);
        for (std::size_t k = 1; k < F.size(); ++k)
            F[k] = F[k - 1] + 2.0 * unif(rng) * mesh->width(k - 1);
        const Homeomorphism phi = trial % 3 == 0 ? Homeomorphism::identity()
                                  : trial % 3 == 1
                                      ? Homeomorphism::power(1.5 + (trial % 7) * 0.5)
                                      : Homeomorphism::power(3.0);
        const double delta = 3.0 * unif(rng);
        const double xi = solve_xi(*mesh, a, F, phi, delta, 1e-12);

        const auto g_of = [&](double cand) {
            double sum = 0.0;
            for (std::size_t i = 0; i < mesh->cells(); ++i)
                sum += phi.invert(cand + 0.5 * (F[i] + F[i + 1])) * mesh->width(i) / a[i];
            return sum;
        };
        const double res = std::fabs(g_of(xi) - delta);
        worst_res = std::fmax(worst_res, res);
        if (res > 1e-10) pass = false;

        const double span = 1.0 + std::fabs(xi);
        const int cells = 500;
        double found = std::numeric_limits<double>::quiet_NaN();
        double prev = g_of(xi - span) - delta;
        for (int j = 1; j <= cells; ++j) {
            const double cand = xi - span + 2.0 * span * j / cells;
            const double cur = g_of(cand) - delta;
            if (prev <= 0.0 && cur >= 0.0) {
                found = cand;
                break;
            }
            prev = cur;
        }
        const double gap = std::fabs(found - xi);
        worst_gap = std::fmax(worst_gap, gap);
        if (!(gap <= 2.0 * span / cells + 1e-9)) pass = false;
    }
    criterion(4, "xi solver vs brute-force scan on 100 instances", pass,
              fmt("worst residual %.3g, worst scan gap %.3g", worst_res, worst_gap));
}

// 5. post-solve statements for the Example 1 / Example 2 fixtures with
// the L_M produced by the bound calculator
void criterion5() {
    bool pass = true;
    std::string detail;
    for (const char* name : {"example1.cfg", "example2.cfg"}) {
        const auto lp = load_problem_file(fixture(name));
        const auto pair = make_lower_upper(lp.problem, lp.mesh);
        const auto bounds = compute_apriori_bounds(lp.problem, pair, *lp.mesh);
        const auto trunc = build_truncated(lp.problem, pair, bounds);
        const auto x0 = linear_path(lp.mesh, lp.problem.boundary.nu1, lp.problem.boundary.nu2,
                                    trunc.model->coeff_fn());
        const auto res = fixed_point_solve(trunc, lp.mesh, x0, lp.options);
        if (res.status != SolveStatus::Converged) {
            pass = false;
            detail += std::string(name) + ": no convergence; ";
            continue;
        }
        for (const auto& c : check_solution_properties(res.path, pair, bounds)) {
            if (!c.pass) {
                pass = false;
                detail += std::string(name) + ": " + c.name + " failed; ";
            }
        }
    }
    if (detail.empty()) detail = "band / sup / flux / derivative checks all hold";
    criterion(5, "a-priori statements for both worked examples", pass, detail);
}

// 6. truncated and untruncated Example 1 solves agree to 1e-6 at n=2048
void criterion6() {
    const auto lp = load_problem_file(fixture("example1.cfg"));
    const auto pair = make_lower_upper(lp.problem, lp.mesh);
    const auto bounds = compute_apriori_bounds(lp.problem, pair, *lp.mesh);
    const auto trunc = build_truncated(lp.problem, pair, bounds);
    const auto x0p = linear_path(lp.mesh, 0.0, 0.0, lp.problem.model->coeff_fn());
    const auto x0t = linear_path(lp.mesh, 0.0, 0.0, trunc.model->coeff_fn());
    const auto plain = fixed_point_solve(lp.problem, lp.mesh, x0p, lp.options);
    const auto truncated = fixed_point_solve(trunc, lp.mesh, x0t, lp.options);
    double sup = std::numeric_limits<double>::infinity();
    if (plain.status == SolveStatus::Converged && truncated.status == SolveStatus::Converged) {
        sup = 0.0;
        for (std::size_t k = 0; k < lp.mesh->node_count(); ++k)
            sup = std::fmax(sup, std::fabs(plain.path.node_values[k] -
                                           truncated.path.node_values[k]));
    }
    criterion(6, "truncated and untruncated solves coincide", sup <= 1e-6,
              fmt("sup difference %.3g", sup));
}

// 7. periodic manufactured cosine at n=2048 including the sweep, under 30 s
void criterion7() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto lp = load_problem_file(fixture("periodic_cosine.cfg"));
    const auto pair = make_lower_upper(lp.problem, lp.mesh);
    const auto res = solve_periodic(lp.problem, pair, lp.mesh, lp.options);
    const auto profile = boundary_sweep(lp.problem, pair, lp.mesh, lp.options);
    const double secs = seconds_since(t0);
    const double sup = sup_error(res.path, [](double t) { return std::cos(2 * M_PI * t); });
    const double vmatch = std::fabs(res.path.start() - res.path.end());
    const double fmatch = std::fabs(flux_at_start(res.path) - flux_at_end(res.path));
    criterion(7, "periodic manufactured cosine with nu-sweep",
              res.status == SolveStatus::Converged && vmatch <= 1e-6 && fmatch <= 1e-6 &&
                  sup <= 5e-3 && secs < 30.0 && profile.size() >= 33,
              fmt("sup %.3g, value gap %.3g, flux gap %.3g", sup, vmatch, fmatch) +
                  fmt(", %.1f s", secs));
}

// 8. Neumann manufactured problem at n=1024 and the Sturm-Liouville
// collapse to plain Dirichlet data
void criterion8() {
    const auto lp = load_problem_file(fixture("neumann_manufactured.cfg"));
    const auto pair = make_lower_upper(lp.problem, lp.mesh);
    const auto res = solve_separated(lp.problem, pair, lp.mesh, lp.options);
    const double sup = sup_error(res.path, [](double t) { return t * (1.0 - t); });

    // collapse: m1 = m2 = 0 routes to the plain Dirichlet solve
    auto sl = lp.problem;
    sl.boundary = BoundarySpec::sturm_liouville(2.0, 0.0, 0.6, 1.0, 0.0, -0.2);
    sl.finalize();
    const auto sl_pair = make_lower_upper(sl, lp.mesh);
    const auto sl_res = solve_separated(sl, sl_pair, lp.mesh, lp.options);
    const auto bounds = compute_apriori_bounds(sl, sl_pair, *lp.mesh);
    auto dir = sl;
    dir.boundary = BoundarySpec::dirichlet(0.3, -0.2);
    const auto trunc = build_truncated(dir, sl_pair, bounds);
    const auto direct = fixed_point_solve(
        trunc, lp.mesh, linear_path(lp.mesh, 0.3, -0.2, trunc.model->coeff_fn()), lp.options);
    double collapse_gap = std::numeric_limits<double>::infinity();
    if (sl_res.status == SolveStatus::Converged && direct.status == SolveStatus::Converged)
        collapse_gap = path_distance(sl_res.path, direct.path);

    criterion(8, "Neumann manufactured solve and Sturm-Liouville collapse",
              res.status == SolveStatus::Converged && sup <= 1e-3 && collapse_gap <= 1e-10,
              fmt("sup %.3g, collapse gap %.3g", sup, collapse_gap));
}

// 9. bound calculator closed forms
void criterion9() {
    const auto make = [](const char* psi, const char* l) {
        BvpProblem prob;
        prob.T = 1.0;
        prob.phi = Homeomorphism::identity();
        prob.coeff.a = Expression::parse("1", {"t", "x"});
        prob.coeff.h = Expression::parse("1", {"t"});
        prob.coeff.p = 2.0;
        prob.f = Expression::parse("0", {"t", "x", "y"});
        prob.boundary = BoundarySpec::dirichlet(0.0, 0.0);
        prob.lower = Expression::parse("-0.5", {"t"});
        prob.upper = Expression::parse("0.5", {"t"});
        NagumoData ng;
        ng.H = 1.0;
        ng.psi = Expression::parse(psi, {"s"});
        ng.l = Expression::parse(l, {"t"});
        ng.mu = Expression::parse("0", {"t"});
        prob.nagumo = std::move(ng);
        prob.finalize();
        return prob;
    };
    const auto mesh = Mesh::build(1.0, {}, 256, 3.0);

    // constant gauge: condition L - N > 2 with N = 1.0001
    auto flat = make("1", "2");
    const auto pair1 = make_lower_upper(flat, mesh);
    const double lm1 = compute_apriori_bounds(flat, pair1, *mesh).L_M;
    const bool ok1 = lm1 > 3.0 && lm1 <= 3.0 * 1.001;

    // linear gauge with the cubic map: L = N sqrt(e)
    auto lin = make("s", "1");
    lin.phi = Homeomorphism::power(3.0);
    lin.finalize();
    const auto pair2 = make_lower_upper(lin, mesh);
    const auto b2 = compute_apriori_bounds(lin, pair2, *mesh);
    const double expected = b2.N * std::exp(0.5);
    const bool ok2 = std::fabs(b2.L_M - expected) <= 1e-3 * expected;

    criterion(9, "bound calculator closed forms", ok1 && ok2,
              fmt("constant gauge L_M %.6g, linear gauge L_M %.6g vs %.6g", lm1, b2.L_M,
                  expected));
}

// 10. bit-exact clamp/penalty properties and the parser round trip
void criterion10() {
    bool pass = true;
    std::string detail = "all bit-exact";

    BvpProblem prob;
    prob.T = 1.0;
    prob.phi = Homeomorphism::identity();
    prob.coeff.a = Expression::parse("1", {"t", "x"});
    prob.coeff.h = Expression::parse("1", {"t"});
    prob.coeff.p = 2.0;
    prob.f = Expression::parse("(x + sin(2*pi*t)) + x^2*y", {"t", "x", "y"});
    prob.boundary = BoundarySpec::dirichlet(0.0, 0.0);
    prob.lower = Expression::parse("-1", {"t"});
    prob.upper = Expression::parse("1", {"t"});
    prob.finalize();
    const auto mesh = Mesh::build(1.0, {}, 64, 3.0);
    const auto pair = make_lower_upper(prob, mesh);
    const CoeffFn one = [](double, double) { return 1.0; };
    CellFunction gamma(mesh->cells(), 2.0);

    std::mt19937_64 rng(0xF00DFACEu);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int k = 0; k < 1000 && pass; ++k) {
        std::vector<double> vals(mesh->node_count());
        for (auto& v : vals) v = u(rng);
        const auto x = make_path(mesh, std::move(vals), one);
        const auto once = clamp_T(x, pair, one);
        const auto twice = clamp_T(once, pair, one);
        if (once.node_values != twice.node_values) {
            pass = false;
            detail = "clamp_T not idempotent";
        }
        CellFunction z(mesh->cells());
        for (auto& v : z.values) v = u(rng);
        const auto zc = clamp_D(z, gamma);
        if (clamp_D(zc, gamma).values != zc.values) {
            pass = false;
            detail = "clamp_D not idempotent";
        }
        const double t = 0.5 * (1.0 + u(rng) / 3.0);
        const double xin = u(rng) / 3.0;  // inside [-1, 1]
        const double y = u(rng);
        const double fv[3] = {t, xin, y};
        if (f_star_eval(t, xin, y, pair, prob.f) != prob.f.eval(fv)) {
            pass = false;
            detail = "penalized rhs differs inside the band";
        }
    }

    std::mt19937_64 rng2(0x5eedf00dULL);
    for (int i = 0; i < 500 && pass; ++i) {
        Expression::Builder b;
        b.variable("t");
        b.variable("x");
        b.variable("y");
        std::function<std::int32_t(int)> gen = [&](int depth) -> std::int32_t {
            std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 8);
            std::uniform_real_distribution<double> cst(0.0, 8.0);
            switch (pick(rng2)) {
                case 0: return b.constant(cst(rng2));
                case 1: {
                    std::uniform_int_distribution<int> v(0, 2);
                    const char* names[3] = {"t", "x", "y"};
                    return b.variable(names[v(rng2)]);
                }
                case 2: return b.binary(ExprOp::Add, gen(depth - 1), gen(depth - 1));
                case 3: return b.binary(ExprOp::Sub, gen(depth - 1), gen(depth - 1));
                case 4: return b.binary(ExprOp::Mul, gen(depth - 1), gen(depth - 1));
                case 5: return b.binary(ExprOp::Div, gen(depth - 1), gen(depth - 1));
                case 6: return b.binary(ExprOp::Pow, gen(depth - 1), gen(depth - 1));
                case 7: return b.unary(ExprOp::Neg, gen(depth - 1));
                default: {
                    std::uniform_int_distribution<int> f(0, 5);
                    const ExprOp ops[6] = {ExprOp::Abs, ExprOp::Sin,  ExprOp::Cos,
                                           ExprOp::Exp, ExprOp::Sqrt, ExprOp::Atan};
                    return b.unary(ops[f(rng2)], gen(depth - 1));
                }
            }
        };
        const Expression original = b.finish(gen(5));
        const Expression reparsed = Expression::parse(original.print(), original.variables());
        if (!original.structurally_equal(reparsed)) {
            pass = false;
            detail = "parser round trip failed for: " + original.print();
        }
    }

    criterion(10, "clamp idempotence, band agreement, parser round trip", pass, detail);
}

}  // namespace

int main() {
    std::printf("acceptance suite\n----------------\n");
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    std::printf("----------------\n%s (%d failure%s)\n", failures == 0 ? "ALL PASS" : "FAILED",
                failures, failures == 1 ? "" : "s");
    return failures == 0 ? 0 : 1;
}
