#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "expr.hpp"
#include "mesh.hpp"
#include "path.hpp"
#include "phi_map.hpp"

namespace phibvp {

/// Coefficient a(t,x) together with its declared lower envelope h(t),
/// the integrability exponent p (1/h must be in L^p), and the declared
/// zeros of h toward which meshes are graded.
struct Coefficient {
    Expression a;  // variables (t, x)
    Expression h;  // variable (t)
    double p = 2.0;
    std::vector<double> singular_points;

    double eval_a(double t, double x) const {
        const double v[2] = {t, x};
        return a.eval(v);
    }
    double eval_h(double t) const {
        const double v[1] = {t};
        return h.eval(v);
    }
};

/// Growth-condition data: |f(t,x,y)| <= psi(|Phi(a(t,x)y)|) * (l(t) +
/// mu(t) |y|^((q-1)/q)) for |y| >= H, with 1/psi locally integrable and
/// of divergent integral. q may be infinity.
struct NagumoData {
    double H = 1.0;
    Expression psi;  // variable (s), defined on (0, inf)
    Expression l;    // variable (t)
    Expression mu;   // variable (t)
    double q = std::numeric_limits<double>::infinity();

    double eval_psi(double s) const {
        const double v[1] = {s};
        return psi.eval(v);
    }
    double eval_l(double t) const {
        const double v[1] = {t};
        return l.eval(v);
    }
    double eval_mu(double t) const {
        const double v[1] = {t};
        return mu.eval(v);
    }
};

/// Boundary condition; exactly one of the six kinds.
struct BoundarySpec {
    enum class Kind { Dirichlet, Functional, Periodic, SturmLiouville, Neumann, Separated };

    Kind kind = Kind::Dirichlet;
    double nu1 = 0.0;  // Dirichlet / SturmLiouville / Neumann
    double nu2 = 0.0;
    double l1 = 1.0, m1 = 0.0;  // SturmLiouville coefficients
    double l2 = 1.0, m2 = 0.0;
    std::optional<Expression> g;    // Functional, variables (u, v, w, z)
    std::optional<Expression> rho;  // Functional, variable (r)
    std::optional<Expression> p;    // Separated, variables (s, w)
    std::optional<Expression> q;    // Separated, variables (s, w)

    static BoundarySpec dirichlet(double nu1, double nu2);
    static BoundarySpec periodic();
    static BoundarySpec neumann(double nu1, double nu2);
    static BoundarySpec sturm_liouville(double l1, double m1, double nu1, double l2, double m2,
                                        double nu2);
    static BoundarySpec functional(Expression g, Expression rho);
    static BoundarySpec separated(Expression p, Expression q);

    const char* kind_name() const;
};

/// Optional exponents audited for the power-law growth family
/// f = sigma * g(x) * |y|^delta with sigma in L^tau.
struct GrowthAudit {
    double tau = 0.0;
    double delta = 0.0;
};

/// Pointwise view of the ODE data used by the solver core. The plain
/// model evaluates the declared expressions; the truncated model wraps
/// a base model with the state/derivative clamps and the penalized
/// right-hand side. The *_cells / *_interior_nodes hooks exist so the
/// truncated model can apply path-level clamps before sampling.
class OdeModel {
public:
    virtual ~OdeModel() = default;

    virtual double coeff(double t, double x) const = 0;
    virtual double rhs(double t, double x, double y) const = 0;

    /// f samples at cell midpoints of `x` (arguments: midpoint t,
    /// interpolated x, cell derivative).
    virtual void rhs_cells(const DiscretePath& x, std::vector<double>& out) const;

    /// f samples at interior nodes (arguments: node t, node value, mean
    /// of the adjacent cell derivatives). out has node_count-2 entries.
    virtual void rhs_interior_nodes(const DiscretePath& x, std::vector<double>& out) const;

    CoeffFn coeff_fn() const {
        return [this](double t, double x) { return coeff(t, x); };
    }
};

/// A full boundary value problem declaration.
struct BvpProblem {
    double T = 1.0;
    Homeomorphism phi;
    Coefficient coeff;
    Expression f;  // variables (t, x, y)
    std::optional<NagumoData> nagumo;
    BoundarySpec boundary;
    std::optional<Expression> lower;  // alpha(t)
    std::optional<Expression> upper;  // beta(t)
    std::optional<GrowthAudit> growth;

    /// Model evaluated by the solver; installed by finalize() and
    /// replaced by build_truncated().
    std::shared_ptr<const OdeModel> model;

    /// Installs the plain expression-backed model. Must be called after
    /// the declaration fields are filled.
    void finalize();

    bool has_pair() const { return lower.has_value() && upper.has_value(); }

    DiscretePath lower_path(std::shared_ptr<const Mesh> mesh) const;
    DiscretePath upper_path(std::shared_ptr<const Mesh> mesh) const;
};

struct ValidationItem {
    std::string name;
    bool pass = true;
    double worst = 0.0;                 // worst margin observed (sign convention per item)
    std::string witness;                // human-readable failure location, empty when passing
};

struct ValidationReport {
    std::vector<ValidationItem> items;

    bool all_pass() const {
        for (const auto& it : items)
            if (!it.pass) return false;
        return true;
    }
    const ValidationItem* find(const std::string& name) const {
        for (const auto& it : items)
            if (it.name == name) return &it;
        return nullptr;
    }
};

/// Audits the problem hypotheses numerically: a >= h on a sample grid,
/// integrability of (1/h)^p on the mesh, positivity of psi, sign and
/// monotonicity requirements of the boundary data, ordering of the
/// lower/upper pair, and the homeomorphism monotonicity audit. Failures
/// are report entries with witness points, never exceptions.
ValidationReport validate_problem(const BvpProblem& prob, const Mesh& mesh,
                                  std::size_t samples = 64);

/// q = tau*p / (p + tau*(r-1)) from the power-law growth audit.
double growth_conjugate_exponent(double tau, double p, double r);

}  // namespace phibvp
