#include "path.hpp"

#include <cmath>

namespace phibvp {

double DiscretePath::value_at(double t) const {
    const std::size_t i = mesh->cell_of(t);
    const double t0 = mesh->node(i);
    return node_values[i] + cell_derivatives[i] * (t - t0);
}

void DiscretePath::rebuild(const CoeffFn& a) {
    const std::size_t n = mesh->cells();
    cell_derivatives.values.resize(n);
    ax_values.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        cell_derivatives[i] = (node_values[i + 1] - node_values[i]) / mesh->width(i);
        ax_values[i] = a(mesh->midpoint(i), midpoint_value(i)) * cell_derivatives[i];
    }
}

DiscretePath make_path(std::shared_ptr<const Mesh> mesh, std::vector<double> node_values,
                       const CoeffFn& a) {
    if (node_values.size() != mesh->node_count())
        throw Error("node value count does not match mesh");
    DiscretePath p;
    p.mesh = std::move(mesh);
    p.node_values = std::move(node_values);
    p.rebuild(a);
    return p;
}

DiscretePath linear_path(std::shared_ptr<const Mesh> mesh, double v0, double v1,
                         const CoeffFn& a) {
    std::vector<double> vals(mesh->node_count());
    const double T = mesh->T();
    for (std::size_t i = 0; i < vals.size(); ++i)
        vals[i] = v0 + (v1 - v0) * mesh->node(i) / T;
    return make_path(std::move(mesh), std::move(vals), a);
}

DiscretePath path_from_function(std::shared_ptr<const Mesh> mesh,
                                const std::function<double(double)>& g, const CoeffFn& a) {
    std::vector<double> vals(mesh->node_count());
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = g(mesh->node(i));
    return make_path(std::move(mesh), std::move(vals), a);
}

double path_distance(const DiscretePath& x, const DiscretePath& y) {
    double sup = 0.0;
    for (std::size_t i = 0; i < x.node_values.size(); ++i)
        sup = std::fmax(sup, std::fabs(x.node_values[i] - y.node_values[i]));
    double deriv_l1 = 0.0;
    for (std::size_t i = 0; i < x.cells(); ++i)
        deriv_l1 += std::fabs(x.cell_derivatives[i] - y.cell_derivatives[i]) * x.mesh->width(i);
    return sup + deriv_l1;
}

namespace {

double extrapolate(double t, double t0, double v0, double t1, double v1) {
    if (t1 == t0) return v0;
    return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
}

}  // namespace

double flux_at_start(const DiscretePath& path) {
    const Mesh& m = *path.mesh;
    if (m.cells() < 2) return path.ax_values[0];
    return extrapolate(0.0, m.midpoint(0), path.ax_values[0], m.midpoint(1), path.ax_values[1]);
}

double flux_at_end(const DiscretePath& path) {
    const Mesh& m = *path.mesh;
    const std::size_t n = m.cells();
    if (n < 2) return path.ax_values[n - 1];
    return extrapolate(m.T(), m.midpoint(n - 2), path.ax_values[n - 2], m.midpoint(n - 1),
                       path.ax_values[n - 1]);
}

std::vector<double> flux_at_nodes(const DiscretePath& path) {
    const Mesh& m = *path.mesh;
    const std::size_t n = m.cells();
    std::vector<double> out(m.node_count());
    out.front() = flux_at_start(path);
    out.back() = flux_at_end(path);
    for (std::size_t i = 1; i < n; ++i)
        out[i] = extrapolate(m.node(i), m.midpoint(i - 1), path.ax_values[i - 1], m.midpoint(i),
                             path.ax_values[i]);
    return out;
}

double w1p_norm(const DiscretePath& path, double p) {
    const Mesh& m = *path.mesh;
    CellFunction vals(m.cells());
    for (std::size_t i = 0; i < m.cells(); ++i) vals[i] = path.midpoint_value(i);
    return lp_norm(m, vals, p) + lp_norm(m, path.cell_derivatives, p);
}

}  // namespace phibvp
