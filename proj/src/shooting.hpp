#pragma once

#include <functional>

#include "truncation.hpp"

namespace phibvp {

/// Functional boundary pair: the matching map rho for x(T) = rho(x(0))
/// and the score g(x(0), x(T), flux(0), flux(T)) driven to zero.
struct FunctionalBc {
    std::function<double(double)> rho;
    std::function<double(double, double, double, double)> g;
};

/// Solves the functional boundary problem by a shooting sweep: a
/// uniform nu-grid over [alpha(0), beta(0)] is scanned for the
/// rightmost zero or sign change of s(nu) = g(...) over the Dirichlet
/// solves x(0) = nu, x(T) = rho(nu), then bisected to |s| <= bc_tol.
/// Preconditions on the pair (g >= 0 at the lower data, <= 0 at the
/// upper data, endpoints matched through rho) are checked and throw
/// Error naming the failed hypothesis. A profile with no sign change is
/// a NoSignChange outcome carrying the scanned (nu, s) pairs.
SolveResult shoot_functional(const BvpProblem& prob, const LowerUpperPair& pair,
                             std::shared_ptr<const Mesh> mesh, const SolveOptions& opts);

/// Periodic problem x(0) = x(T), flux(0) = flux(T): delegates to the
/// functional sweep with rho = identity and g = w - z after checking
/// the periodic pair hypotheses.
SolveResult solve_periodic(const BvpProblem& prob, const LowerUpperPair& pair,
                           std::shared_ptr<const Mesh> mesh, const SolveOptions& opts);

/// Separated conditions p(x(0), flux(0)) = 0, q(x(T), flux(T)) = 0
/// (general, Sturm-Liouville, or Neumann kinds). Two-level shooting:
/// the outer parameter is nu = x(T) scored by q, the inner sweep finds
/// x(0) zeroing p. The Sturm-Liouville kind with m1 = m2 = 0 collapses
/// to the direct Dirichlet solve at (nu1/l1, nu2/l2).
SolveResult solve_separated(const BvpProblem& prob, const LowerUpperPair& pair,
                            std::shared_ptr<const Mesh> mesh, const SolveOptions& opts);

/// Boundary-kind dispatch for the non-Dirichlet kinds.
SolveResult solve_with_shooting(const BvpProblem& prob, const LowerUpperPair& pair,
                                std::shared_ptr<const Mesh> mesh, const SolveOptions& opts);

/// The outer-level s(nu) profile alone (the CLI `sweep` command).
std::vector<std::pair<double, double>> boundary_sweep(const BvpProblem& prob,
                                                      const LowerUpperPair& pair,
                                                      std::shared_ptr<const Mesh> mesh,
                                                      const SolveOptions& opts);

namespace detail {

/// Outcome of the grid scan + bisection selection rule.
struct SweepSelection {
    bool found = false;
    double nu = 0.0;
    double s = 0.0;
    std::vector<std::pair<double, double>> profile;
};

/// Scans `grid_points` uniform points on [lo, hi], preferring the
/// rightmost event: a point with |s| <= tol wins outright, otherwise
/// the rightmost strict sign change is refined (regula falsi with a
/// bisection safeguard) until |s| <= tol. The scan walks right to left
/// and stops at the first event unless `full_scan` is set, which keeps
/// the identical selection while skipping needless inner solves.
/// `eval` may be stateful (warm-started inner solves).
SweepSelection sweep_and_bisect(const std::function<double(double)>& eval, double lo, double hi,
                                int grid_points, double tol, bool full_scan = false);

}  // namespace detail

}  // namespace phibvp
