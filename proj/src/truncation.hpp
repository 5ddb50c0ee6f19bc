#pragma once

#include "bounds.hpp"
#include "dirichlet.hpp"
#include "problem.hpp"

namespace phibvp {

/// A verified lower/upper solution pair on the solve mesh. The residual
/// fields hold the extreme value of d/dt Phi(flux) - f over interior
/// nodes: the lower side must stay >= -tol, the upper side <= tol.
struct LowerUpperPair {
    DiscretePath alpha;
    DiscretePath beta;
    double alpha_residual = 0.0;
    double beta_residual = 0.0;
};

enum class PairSide { Lower, Upper };

struct SideResidual {
    PairSide side = PairSide::Lower;
    double extreme = 0.0;  // min (lower) or max (upper) of lhs - f
    double worst_t = 0.0;
    std::size_t worst_node = 0;
};

/// d/dt Phi(flux of candidate) - f at interior nodes; reports the
/// extreme value and where it occurs. A lower solution passes when the
/// minimum is >= -tol, an upper solution when the maximum is <= tol.
SideResidual verify_lower_upper(const DiscretePath& candidate, const BvpProblem& prob,
                                PairSide side);

/// Materializes the declared pair on `mesh` and fills in the residuals.
LowerUpperPair make_lower_upper(const BvpProblem& prob, std::shared_ptr<const Mesh> mesh);

/// Computes (M, a0, N, L_M, gamma0, gamma_hat):
///   M   = max over nodes of |alpha|, |beta|
///   a0  = grid max of a over [0,T] x [-M, M] (128 x 128)
///   N   = 1.0001 * max{H, 2M/T} * a0, raised further until
///         Phi(N) > 0 > Phi(-N)
///   L_M = smallest flux level (doubling search plus bisection to 1e-4
///         relative) making the smaller of the two gauge integrals
///         int 1/psi over [Phi(N), Phi(L)] and [-Phi(-N), -Phi(-L)]
///         exceed ||l||_1 + ||mu||_q (2M)^((q-1)/q)
/// Throws NumericError when L reaches 1e12 without satisfying the
/// condition (the gauge integral diverges too slowly to resolve).
AprioriBounds compute_apriori_bounds(const BvpProblem& prob, const LowerUpperPair& pair,
                                     const Mesh& mesh);

/// Nodewise clamp of x into [alpha, beta]; derivatives and flux are
/// recomputed from the clamped nodes under the coefficient `a`.
/// Idempotent bit-exactly.
DiscretePath clamp_T(const DiscretePath& x, const LowerUpperPair& pair, const CoeffFn& a);

/// Cellwise clamp of z into [-gamma_hat, gamma_hat].
CellFunction clamp_D(const CellFunction& z, const CellFunction& gamma_hat);

/// Pointwise penalized right-hand side: f inside the band, the boundary
/// value of f plus arctan(overshoot) outside. alpha(t), alpha'(t) are
/// read from the pair's cell containing t.
double f_star_eval(double t, double x, double y, const LowerUpperPair& pair, const Expression& f);

/// Problem whose coefficient is a(t, T(x)(t)) and right-hand side is
/// f*(t, x, D(T(x)')); shares mesh and boundary data with `prob`.
BvpProblem build_truncated(const BvpProblem& prob, const LowerUpperPair& pair,
                           const AprioriBounds& bounds);

/// Post-solve statements: (band) alpha <= x <= beta at nodes,
/// (sup) max |x| <= M, (flux) max cell |flux| <= L_M, (deriv)
/// |x'| <= gamma0 per cell; tolerances are 1e-9 of each scale.
std::vector<InvariantCheck> check_solution_properties(const DiscretePath& x,
                                                      const LowerUpperPair& pair,
                                                      const AprioriBounds& bounds);

}  // namespace phibvp
