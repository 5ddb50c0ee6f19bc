#include "problem.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace phibvp {

BoundarySpec BoundarySpec::dirichlet(double nu1, double nu2) {
    BoundarySpec b;
    b.kind = Kind::Dirichlet;
    b.nu1 = nu1;
    b.nu2 = nu2;
    return b;
}

BoundarySpec BoundarySpec::periodic() {
    BoundarySpec b;
    b.kind = Kind::Periodic;
    return b;
}

BoundarySpec BoundarySpec::neumann(double nu1, double nu2) {
    BoundarySpec b;
    b.kind = Kind::Neumann;
    b.nu1 = nu1;
    b.nu2 = nu2;
    return b;
}

BoundarySpec BoundarySpec::sturm_liouville(double l1, double m1, double nu1, double l2, double m2,
                                           double nu2) {
    BoundarySpec b;
    b.kind = Kind::SturmLiouville;
    b.l1 = l1;
    b.m1 = m1;
    b.nu1 = nu1;
    b.l2 = l2;
    b.m2 = m2;
    b.nu2 = nu2;
    return b;
}

BoundarySpec BoundarySpec::functional(Expression g, Expression rho) {
    BoundarySpec b;
    b.kind = Kind::Functional;
    b.g = std::move(g);
    b.rho = std::move(rho);
    return b;
}

BoundarySpec BoundarySpec::separated(Expression p, Expression q) {
    BoundarySpec b;
    b.kind = Kind::Separated;
    b.p = std::move(p);
    b.q = std::move(q);
    return b;
}

const char* BoundarySpec::kind_name() const {
    switch (kind) {
        case Kind::Dirichlet: return "dirichlet";
        case Kind::Functional: return "functional";
        case Kind::Periodic: return "periodic";
        case Kind::SturmLiouville: return "sturm_liouville";
        case Kind::Neumann: return "neumann";
        case Kind::Separated: return "separated";
    }
    return "?";
}

void OdeModel::rhs_cells(const DiscretePath& x, std::vector<double>& out) const {
    const Mesh& m = *x.mesh;
    out.resize(m.cells());
    for (std::size_t i = 0; i < m.cells(); ++i)
        out[i] = rhs(m.midpoint(i), x.midpoint_value(i), x.cell_derivatives[i]);
}

void OdeModel::rhs_interior_nodes(const DiscretePath& x, std::vector<double>& out) const {
    const Mesh& m = *x.mesh;
    out.resize(m.node_count() >= 2 ? m.node_count() - 2 : 0);
    for (std::size_t i = 1; i + 1 < m.node_count(); ++i) {
        const double y = 0.5 * (x.cell_derivatives[i - 1] + x.cell_derivatives[i]);
        out[i - 1] = rhs(m.node(i), x.node_values[i], y);
    }
}

namespace {

class PlainModel final : public OdeModel {
public:
    PlainModel(Expression a, Expression f) : a_(std::move(a)), f_(std::move(f)) {}

    double coeff(double t, double x) const override {
        const double v[2] = {t, x};
        return a_.eval(v);
    }

    double rhs(double t, double x, double y) const override {
        const double v[3] = {t, x, y};
        return f_.eval(v);
    }

private:
    Expression a_;
    Expression f_;
};

}  // namespace

void BvpProblem::finalize() {
    model = std::make_shared<PlainModel>(coeff.a, f);
}

DiscretePath BvpProblem::lower_path(std::shared_ptr<const Mesh> mesh) const {
    if (!lower) throw Error("problem declares no lower solution");
    const Expression& e = *lower;
    return path_from_function(
        std::move(mesh),
        [&e](double t) {
            const double v[1] = {t};
            return e.eval(v);
        },
        model->coeff_fn());
}

DiscretePath BvpProblem::upper_path(std::shared_ptr<const Mesh> mesh) const {
    if (!upper) throw Error("problem declares no upper solution");
    const Expression& e = *upper;
    return path_from_function(
        std::move(mesh),
        [&e](double t) {
            const double v[1] = {t};
            return e.eval(v);
        },
        model->coeff_fn());
}

double growth_conjugate_exponent(double tau, double p, double r) {
    return tau * p / (p + tau * (r - 1.0));
}

namespace {

std::string at_point(double t, double x) {
    std::ostringstream os;
    os << "t=" << t << ", x=" << x;
    return os.str();
}

std::string at_value(const char* name, double v) {
    std::ostringstream os;
    os << name << "=" << v;
    return os.str();
}

// Worst (minimum) margin of `f` over a grid; pass when min >= -tol.
template <typename F>
ValidationItem min_margin_item(const std::string& name, F&& margin, double tol = 0.0) {
    ValidationItem item;
    item.name = name;
    item.worst = std::numeric_limits<double>::infinity();
    margin([&](double value, const std::string& where) {
        if (value < item.worst) {
            item.worst = value;
            if (value < -tol) item.witness = where;
        }
    });
    item.pass = item.worst >= -tol;
    if (item.pass) item.witness.clear();
    return item;
}

}  // namespace

ValidationReport validate_problem(const BvpProblem& prob, const Mesh& mesh, std::size_t samples) {
    ValidationReport report;
    const std::size_t ns = std::max<std::size_t>(samples, 2);

    // Sample ranges: t over the mesh, x over +-10*max(1, pair bound).
    double xmag = 1.0;
    if (prob.has_pair()) {
        try {
            const auto alpha = prob.lower_path(std::shared_ptr<const Mesh>(&mesh, [](auto*) {}));
            const auto beta = prob.upper_path(std::shared_ptr<const Mesh>(&mesh, [](auto*) {}));
            for (double v : alpha.node_values) xmag = std::fmax(xmag, std::fabs(v));
            for (double v : beta.node_values) xmag = std::fmax(xmag, std::fabs(v));
        } catch (const Error&) {
            // pair evaluation failures surface below
        }
    }
    const double xspan = 10.0 * xmag;

    const auto t_sample = [&](std::size_t i) {
        return mesh.T() * (static_cast<double>(i) + 0.5) / static_cast<double>(ns);
    };
    const auto x_sample = [&](std::size_t j) {
        return -xspan + 2.0 * xspan * static_cast<double>(j) / static_cast<double>(ns - 1);
    };

    // Homeomorphism monotonicity audit.
    {
        ValidationItem item;
        item.name = "phi_strictly_increasing";
        item.pass = true;
        item.worst = std::numeric_limits<double>::infinity();
        std::mt19937_64 rng(0x80b5a9d1u);
        std::uniform_real_distribution<double> ys(-100.0, 100.0);
        for (int k = 0; k < 1000; ++k) {
            double y1 = ys(rng), y2 = ys(rng);
            if (y1 == y2) continue;
            if (y1 > y2) std::swap(y1, y2);
            double gap;
            try {
                gap = prob.phi.eval(y2) - prob.phi.eval(y1);
            } catch (const Error& e) {
                item.pass = false;
                item.witness = e.what();
                break;
            }
            if (gap < item.worst) item.worst = gap;
            if (gap <= 0.0) {
                item.pass = false;
                item.witness = "y1=" + std::to_string(y1) + ", y2=" + std::to_string(y2);
                break;
            }
        }
        report.items.push_back(std::move(item));
    }

    // (a) coefficient dominates its envelope: a(t,x) >= h(t) >= 0.
    report.items.push_back(min_margin_item("coefficient_dominates_envelope", [&](auto&& note) {
        for (std::size_t i = 0; i < ns; ++i) {
            const double t = t_sample(i);
            double h;
            try {
                h = prob.coeff.eval_h(t);
            } catch (const Error&) {
                note(-std::numeric_limits<double>::infinity(), at_value("h blew up at t", t));
                continue;
            }
            note(h, at_value("h negative at t", t));
            for (std::size_t j = 0; j < ns; ++j) {
                const double x = x_sample(j);
                try {
                    note(prob.coeff.eval_a(t, x) - h, at_point(t, x));
                } catch (const Error&) {
                    note(-std::numeric_limits<double>::infinity(), at_point(t, x));
                }
            }
        }
    }));

    // (b) 1/h integrable with exponent p on the graded mesh.
    {
        ValidationItem item;
        item.name = "envelope_reciprocal_integrable";
        item.pass = true;
        try {
            CellFunction w(mesh.cells());
            for (std::size_t i = 0; i < mesh.cells(); ++i) {
                const double h = prob.coeff.eval_h(mesh.midpoint(i));
                if (!(h > 0.0))
                    throw NumericError("envelope vanishes at midpoint t=" +
                                       std::to_string(mesh.midpoint(i)));
                w[i] = 1.0 / h;
            }
            item.worst = lp_norm(mesh, w, prob.coeff.p);
            if (!std::isfinite(item.worst)) {
                item.pass = false;
                item.witness = "norm overflowed";
            }
        } catch (const Error& e) {
            item.pass = false;
            item.witness = e.what();
        }
        report.items.push_back(std::move(item));
    }

    // Nagumo data positivity.
    if (prob.nagumo) {
        const NagumoData& ng = *prob.nagumo;
        report.items.push_back(min_margin_item("nagumo_psi_positive", [&](auto&& note) {
            for (std::size_t i = 0; i < ns; ++i) {
                // log-spaced samples spanning (1e-6, 1e6)
                const double s = std::pow(10.0, -6.0 + 12.0 * (static_cast<double>(i) + 0.5) / ns);
                try {
                    note(ng.eval_psi(s), at_value("psi <= 0 at s", s));
                } catch (const Error&) {
                    note(-std::numeric_limits<double>::infinity(), at_value("psi blew up at s", s));
                }
            }
        }, -1e-300));
        report.items.push_back(min_margin_item("nagumo_weights_nonnegative", [&](auto&& note) {
            for (std::size_t i = 0; i < ns; ++i) {
                const double t = t_sample(i);
                try {
                    note(ng.eval_l(t), at_value("l negative at t", t));
                    note(ng.eval_mu(t), at_value("mu negative at t", t));
                } catch (const Error&) {
                    note(-std::numeric_limits<double>::infinity(), at_value("weight blew up at t", t));
                }
            }
        }));
        {
            ValidationItem item;
            item.name = "nagumo_H_positive";
            item.pass = ng.H > 0.0;
            item.worst = ng.H;
            report.items.push_back(std::move(item));
        }
        {
            ValidationItem item;
            item.name = "nagumo_q_admissible";
            item.pass = std::isinf(ng.q) || ng.q > 1.0;
            item.worst = ng.q;
            report.items.push_back(std::move(item));
        }
    }

    // Pair ordering (alpha <= beta at nodes).
    if (prob.has_pair()) {
        report.items.push_back(min_margin_item("pair_ordered", [&](auto&& note) {
            try {
                auto hold = std::shared_ptr<const Mesh>(&mesh, [](auto*) {});
                const auto alpha = prob.lower_path(hold);
                const auto beta = prob.upper_path(hold);
                for (std::size_t i = 0; i < mesh.node_count(); ++i)
                    note(beta.node_values[i] - alpha.node_values[i],
                         at_value("alpha > beta at t", mesh.node(i)));
            } catch (const Error& e) {
                note(-std::numeric_limits<double>::infinity(), e.what());
            }
        }, 1e-12));
    }

    // Boundary-data monotonicity and endpoint coefficient conditions.
    const BoundarySpec& bc = prob.boundary;
    const bool needs_endpoints = bc.kind != BoundarySpec::Kind::Dirichlet;
    if (needs_endpoints) {
        report.items.push_back(min_margin_item("coefficient_nonzero_at_endpoints", [&](auto&& note) {
            for (std::size_t j = 0; j < ns; ++j) {
                const double x = x_sample(j);
                try {
                    note(prob.coeff.eval_a(0.0, x), at_point(0.0, x));
                    note(prob.coeff.eval_a(prob.T, x), at_point(prob.T, x));
                } catch (const Error&) {
                    note(-std::numeric_limits<double>::infinity(), at_point(0.0, x));
                }
            }
        }, -1e-14));  // strict positivity: zero fails
    }

    const double probe = 1.0 + xmag;
    const auto monotone_in = [&](const Expression& e, std::size_t var_count, std::size_t which,
                                 bool increasing, const std::string& name) {
        return min_margin_item(name, [&](auto&& note) {
            std::mt19937_64 rng(0xc0ffee11u + which);
            std::uniform_real_distribution<double> vals(-probe, probe);
            for (std::size_t k = 0; k < 256; ++k) {
                std::vector<double> lo(var_count), hi;
                for (auto& v : lo) v = vals(rng);
                hi = lo;
                hi[which] = lo[which] + std::fabs(vals(rng)) + 1e-3;
                try {
                    const double d = e.eval(hi) - e.eval(lo);
                    note(increasing ? d : -d, at_value("argument", lo[which]));
                } catch (const Error&) {
                    note(-std::numeric_limits<double>::infinity(), "evaluation failure");
                }
            }
        }, 1e-12);
    };

    switch (bc.kind) {
        case BoundarySpec::Kind::Functional:
            report.items.push_back(monotone_in(*bc.rho, 1, 0, true, "rho_increasing"));
            report.items.push_back(monotone_in(*bc.g, 4, 2, true, "g_increasing_in_start_flux"));
            report.items.push_back(monotone_in(*bc.g, 4, 3, false, "g_decreasing_in_end_flux"));
            break;
        case BoundarySpec::Kind::Separated:
            report.items.push_back(monotone_in(*bc.p, 2, 1, true, "p_increasing_in_flux"));
            report.items.push_back(monotone_in(*bc.q, 2, 1, false, "q_decreasing_in_flux"));
            break;
        case BoundarySpec::Kind::SturmLiouville: {
            ValidationItem item;
            item.name = "sturm_liouville_weights_nonnegative";
            item.worst = std::fmin(bc.m1, bc.m2);
            item.pass = item.worst >= 0.0;
            if (!item.pass) item.witness = "m1, m2 must be >= 0";
            report.items.push_back(std::move(item));
            break;
        }
        default:
            break;
    }

    // Optional exponent audit for the power-law growth family.
    if (prob.growth) {
        const double tau = prob.growth->tau;
        const double delta = prob.growth->delta;
        const double p = prob.coeff.p;
        const double r = prob.phi.kind() == Homeomorphism::Kind::Power ? prob.phi.exponent() : 2.0;
        {
            ValidationItem item;
            item.name = "growth_exponent_balance";
            item.worst = 1.0 - (1.0 / tau + (r - 1.0) / p);  // must be > 0
            item.pass = item.worst > 0.0;
            if (!item.pass) item.witness = "1/tau + (r-1)/p must stay below 1";
            report.items.push_back(std::move(item));
        }
        {
            ValidationItem item;
            item.name = "growth_delta_bound";
            const double bound = 1.0 - 1.0 / tau + (r - 1.0) * (1.0 - 1.0 / p);
            item.worst = bound - delta;  // >= 0 (boundary passes)
            item.pass = item.worst >= -1e-12;
            if (!item.pass) item.witness = "delta exceeds the admissible exponent";
            report.items.push_back(std::move(item));
        }
        {
            ValidationItem item;
            item.name = "growth_conjugate_exponent";
            item.worst = growth_conjugate_exponent(tau, p, r);
            item.pass = item.worst > 1.0;
            if (!item.pass) item.witness = "q = tau*p/(p + tau*(r-1)) must exceed 1";
            report.items.push_back(std::move(item));
        }
    }

    return report;
}

}  // namespace phibvp
