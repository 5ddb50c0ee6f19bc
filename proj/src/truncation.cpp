#include "truncation.hpp"

#include <algorithm>
#include <cmath>

namespace phibvp {

namespace {

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

}  // namespace

SideResidual verify_lower_upper(const DiscretePath& candidate, const BvpProblem& prob,
                                PairSide side) {
    const Mesh& m = *candidate.mesh;
    const CellFunction ax = compute_Ax(candidate, *prob.model);
    std::vector<double> phi_ax(m.cells());
    for (std::size_t i = 0; i < m.cells(); ++i) phi_ax[i] = prob.phi.eval(ax[i]);
    std::vector<double> f_nodes;
    prob.model->rhs_interior_nodes(candidate, f_nodes);

    SideResidual out;
    out.side = side;
    out.extreme = side == PairSide::Lower ? std::numeric_limits<double>::infinity()
                                          : -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < m.node_count(); ++i) {
        const double dm = m.midpoint(i) - m.midpoint(i - 1);
        const double r = (phi_ax[i] - phi_ax[i - 1]) / dm - f_nodes[i - 1];
        const bool worse = side == PairSide::Lower ? r < out.extreme : r > out.extreme;
        if (worse) {
            out.extreme = r;
            out.worst_node = i;
            out.worst_t = m.node(i);
        }
    }
    return out;
}

LowerUpperPair make_lower_upper(const BvpProblem& prob, std::shared_ptr<const Mesh> mesh) {
    LowerUpperPair pair;
    pair.alpha = prob.lower_path(mesh);
    pair.beta = prob.upper_path(std::move(mesh));
    pair.alpha_residual = verify_lower_upper(pair.alpha, prob, PairSide::Lower).extreme;
    pair.beta_residual = verify_lower_upper(pair.beta, prob, PairSide::Upper).extreme;
    return pair;
}

namespace {

// Midpoint quadrature of 1/psi on a log-spaced grid over [lo, hi], 0 < lo < hi.
double gauge_integral(const NagumoData& ng, double lo, double hi, std::size_t points = 1024) {
    if (!(lo > 0.0) || !(hi > lo)) return 0.0;
    const double ratio = std::pow(hi / lo, 1.0 / static_cast<double>(points));
    double sum = 0.0;
    double s0 = lo;
    for (std::size_t j = 0; j < points; ++j) {
        const double s1 = (j + 1 == points) ? hi : s0 * ratio;
        const double mid = 0.5 * (s0 + s1);
        const double psi = ng.eval_psi(mid);
        if (!(psi > 0.0))
            throw NumericError("gauge psi must stay positive; got " + std::to_string(psi) +
                               " at s=" + std::to_string(mid));
        sum += (s1 - s0) / psi;
        s0 = s1;
    }
    return sum;
}

}  // namespace

AprioriBounds compute_apriori_bounds(const BvpProblem& prob, const LowerUpperPair& pair,
                                     const Mesh& mesh) {
    if (!prob.nagumo) throw Error("a-priori bounds require growth-condition data");
    const NagumoData& ng = *prob.nagumo;

    AprioriBounds out;
    for (double v : pair.alpha.node_values) out.M = std::fmax(out.M, std::fabs(v));
    for (double v : pair.beta.node_values) out.M = std::fmax(out.M, std::fabs(v));

    // a0: dense grid max (a is only known to be continuous).
    constexpr std::size_t kGrid = 128;
    for (std::size_t i = 0; i < kGrid; ++i) {
        const double t = mesh.T() * static_cast<double>(i) / (kGrid - 1);
        for (std::size_t j = 0; j < kGrid; ++j) {
            const double x = -out.M + 2.0 * out.M * static_cast<double>(j) / (kGrid - 1);
            out.a0 = std::fmax(out.a0, prob.coeff.eval_a(t, x));
        }
    }

    // N: the next grid value above the strict bound, then raised until
    // the signs of Phi(N) and Phi(-N) straddle zero.
    const double base = std::fmax(ng.H, 2.0 * out.M / prob.T) * out.a0;
    out.N = base > 0.0 ? base * 1.0001 : 1.0;
    for (int k = 0; k < 200 && !(prob.phi.eval(out.N) > 0.0 && prob.phi.eval(-out.N) < 0.0); ++k)
        out.N *= 2.0;
    if (!(prob.phi.eval(out.N) > 0.0 && prob.phi.eval(-out.N) < 0.0))
        throw NumericError("could not find N with Phi(N) > 0 > Phi(-N)");

    // Right-hand side of the gauge condition: ||l||_1 + ||mu||_q (2M)^((q-1)/q).
    CellFunction l_cells(mesh.cells()), mu_cells(mesh.cells());
    for (std::size_t i = 0; i < mesh.cells(); ++i) {
        l_cells[i] = ng.eval_l(mesh.midpoint(i));
        mu_cells[i] = ng.eval_mu(mesh.midpoint(i));
    }
    const double l1 = lp_norm(mesh, l_cells, 1.0);
    const double mu_q = lp_norm(mesh, mu_cells, ng.q);
    const double m_pow = std::isinf(ng.q) ? 2.0 * out.M
                                          : std::pow(2.0 * out.M, (ng.q - 1.0) / ng.q);
    const double rhs = l1 + mu_q * m_pow;

    const auto satisfied = [&](double L) {
        const double up = gauge_integral(ng, prob.phi.eval(out.N), prob.phi.eval(L));
        const double down = gauge_integral(ng, -prob.phi.eval(-out.N), -prob.phi.eval(-L));
        return std::fmin(up, down) > rhs;
    };

    double lo = out.N;
    double hi = 2.0 * out.N;
    while (!satisfied(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12)
            throw NumericError("gauge integral grows too slowly below L=1e12; refine psi or its "
                               "quadrature resolution");
    }
    while (hi - lo > 1e-4 * lo) {
        const double mid = 0.5 * (lo + hi);
        if (satisfied(mid))
            hi = mid;
        else
            lo = mid;
    }
    out.L_M = hi;

    out.gamma0.values.resize(mesh.cells());
    out.gamma_hat.values.resize(mesh.cells());
    for (std::size_t i = 0; i < mesh.cells(); ++i) {
        const double h = prob.coeff.eval_h(mesh.midpoint(i));
        if (!(h > 0.0))
            throw NumericError("envelope vanishes at midpoint t=" +
                               std::to_string(mesh.midpoint(i)));
        out.gamma0[i] = out.L_M / h;
        out.gamma_hat[i] = out.gamma0[i] + std::fabs(pair.alpha.cell_derivatives[i]) +
                           std::fabs(pair.beta.cell_derivatives[i]);
    }
    return out;
}

DiscretePath clamp_T(const DiscretePath& x, const LowerUpperPair& pair, const CoeffFn& a) {
    DiscretePath out = x;
    for (std::size_t i = 0; i < out.node_values.size(); ++i)
        out.node_values[i] =
            clamp(x.node_values[i], pair.alpha.node_values[i], pair.beta.node_values[i]);
    out.rebuild(a);
    return out;
}

CellFunction clamp_D(const CellFunction& z, const CellFunction& gamma_hat) {
    if (z.size() != gamma_hat.size()) throw Error("clamp_D: cell counts differ");
    CellFunction out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = clamp(z[i], -gamma_hat[i], gamma_hat[i]);
    return out;
}

double f_star_eval(double t, double x, double y, const LowerUpperPair& pair, const Expression& f) {
    const auto call = [&f](double t_, double x_, double y_) {
        const double v[3] = {t_, x_, y_};
        return f.eval(v);
    };
    const double al = pair.alpha.value_at(t);
    if (x < al) return call(t, al, pair.alpha.derivative_at(t)) + std::atan(x - al);
    const double be = pair.beta.value_at(t);
    if (x > be) return call(t, be, pair.beta.derivative_at(t)) + std::atan(x - be);
    return call(t, x, y);
}

namespace {

class TruncatedModel final : public OdeModel {
public:
    TruncatedModel(std::shared_ptr<const OdeModel> base, LowerUpperPair pair,
                   CellFunction gamma_hat)
        : base_(std::move(base)), pair_(std::move(pair)), gamma_hat_(std::move(gamma_hat)) {}

    double coeff(double t, double x) const override {
        return base_->coeff(t, clamp(x, pair_.alpha.value_at(t), pair_.beta.value_at(t)));
    }

    double rhs(double t, double x, double y) const override {
        const double al = pair_.alpha.value_at(t);
        if (x < al) return base_->rhs(t, al, pair_.alpha.derivative_at(t)) + std::atan(x - al);
        const double be = pair_.beta.value_at(t);
        if (x > be) return base_->rhs(t, be, pair_.beta.derivative_at(t)) + std::atan(x - be);
        return base_->rhs(t, x, y);
    }

    void rhs_cells(const DiscretePath& x, std::vector<double>& out) const override {
        const Mesh& m = *x.mesh;
        const CellFunction z = clamped_derivatives(x);
        out.resize(m.cells());
        for (std::size_t i = 0; i < m.cells(); ++i)
            out[i] = rhs(m.midpoint(i), x.midpoint_value(i), z[i]);
    }

    void rhs_interior_nodes(const DiscretePath& x, std::vector<double>& out) const override {
        const Mesh& m = *x.mesh;
        const CellFunction z = clamped_derivatives(x);
        out.resize(m.node_count() >= 2 ? m.node_count() - 2 : 0);
        for (std::size_t i = 1; i + 1 < m.node_count(); ++i) {
            const double zn = 0.5 * (z[i - 1] + z[i]);
            const double gn = 0.5 * (gamma_hat_[i - 1] + gamma_hat_[i]);
            out[i - 1] = rhs(m.node(i), x.node_values[i], clamp(zn, -gn, gn));
        }
    }

private:
    // D(T(x)') on cells
    CellFunction clamped_derivatives(const DiscretePath& x) const {
        const Mesh& m = *x.mesh;
        CellFunction z(m.cells());
        for (std::size_t i = 0; i < m.cells(); ++i) {
            const double lo0 = clamp(x.node_values[i], pair_.alpha.node_values[i],
                                     pair_.beta.node_values[i]);
            const double lo1 = clamp(x.node_values[i + 1], pair_.alpha.node_values[i + 1],
                                     pair_.beta.node_values[i + 1]);
            z[i] = clamp((lo1 - lo0) / m.width(i), -gamma_hat_[i], gamma_hat_[i]);
        }
        return z;
    }

    std::shared_ptr<const OdeModel> base_;
    LowerUpperPair pair_;
    CellFunction gamma_hat_;
};

}  // namespace

BvpProblem build_truncated(const BvpProblem& prob, const LowerUpperPair& pair,
                           const AprioriBounds& bounds) {
    if (prob.boundary.kind != BoundarySpec::Kind::Dirichlet)
        throw Error("truncation applies to the Dirichlet problem");
    BvpProblem out = prob;
    out.model = std::make_shared<TruncatedModel>(prob.model, pair, bounds.gamma_hat);
    return out;
}

std::vector<InvariantCheck> check_solution_properties(const DiscretePath& x,
                                                      const LowerUpperPair& pair,
                                                      const AprioriBounds& bounds) {
    std::vector<InvariantCheck> checks;
    const double band_tol = 1e-9 * (1.0 + bounds.M);

    {
        InvariantCheck c;
        c.name = "solution_within_band";
        c.worst = std::numeric_limits<double>::infinity();
        std::size_t worst_node = 0;
        for (std::size_t i = 0; i < x.node_values.size(); ++i) {
            const double margin = std::fmin(x.node_values[i] - pair.alpha.node_values[i],
                                            pair.beta.node_values[i] - x.node_values[i]);
            if (margin < c.worst) {
                c.worst = margin;
                worst_node = i;
            }
        }
        c.pass = c.worst >= -band_tol;
        if (!c.pass) c.detail = "violated at node " + std::to_string(worst_node);
        checks.push_back(std::move(c));
    }
    {
        InvariantCheck c;
        c.name = "solution_sup_bound";
        double sup = 0.0;
        for (double v : x.node_values) sup = std::fmax(sup, std::fabs(v));
        c.worst = bounds.M - sup;
        c.pass = c.worst >= -band_tol;
        checks.push_back(std::move(c));
    }
    {
        InvariantCheck c;
        c.name = "flux_within_LM";
        double sup = 0.0;
        for (std::size_t i = 0; i < x.ax_values.size(); ++i)
            sup = std::fmax(sup, std::fabs(x.ax_values[i]));
        c.worst = bounds.L_M - sup;
        c.pass = c.worst >= -1e-9 * (1.0 + bounds.L_M);
        checks.push_back(std::move(c));
    }
    {
        InvariantCheck c;
        c.name = "derivative_within_gamma0";
        c.worst = std::numeric_limits<double>::infinity();
        std::size_t worst_cell = 0;
        for (std::size_t i = 0; i < x.cell_derivatives.size(); ++i) {
            const double margin = bounds.gamma0[i] + 1e-9 * (1.0 + bounds.gamma0[i]) -
                                  std::fabs(x.cell_derivatives[i]);
            if (margin < c.worst) {
                c.worst = margin;
                worst_cell = i;
            }
        }
        c.pass = c.worst >= 0.0;
        if (!c.pass) c.detail = "violated in cell " + std::to_string(worst_cell);
        checks.push_back(std::move(c));
    }
    return checks;
}

}  // namespace phibvp
