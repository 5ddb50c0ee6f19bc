#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "mesh.hpp"

namespace phibvp {

/// Callable coefficient a(t, x) used when attaching flux values to a path.
using CoeffFn = std::function<double(double, double)>;

/// Piecewise-linear candidate solution on a mesh: values at nodes,
/// divided-difference derivatives on cells, and the flux a(t,x)x' on
/// cells. The derivative field always equals the divided differences of
/// the node values; rebuild() restores both derived fields after any
/// node edit.
struct DiscretePath {
    std::shared_ptr<const Mesh> mesh;
    std::vector<double> node_values;
    CellFunction cell_derivatives;
    CellFunction ax_values;

    std::size_t cells() const { return mesh->cells(); }

    /// Piecewise-linear interpolation of the node values.
    double value_at(double t) const;

    /// Value at the midpoint of `cell` ((x_i + x_{i+1}) / 2).
    double midpoint_value(std::size_t cell) const { return 0.5 * (node_values[cell] + node_values[cell + 1]); }

    /// Cell derivative of the cell containing t.
    double derivative_at(double t) const { return cell_derivatives[mesh->cell_of(t)]; }

    /// Recomputes cell derivatives and flux values from node values.
    void rebuild(const CoeffFn& a);

    double start() const { return node_values.front(); }
    double end() const { return node_values.back(); }
};

/// Builds a path from explicit node values.
DiscretePath make_path(std::shared_ptr<const Mesh> mesh, std::vector<double> node_values,
                       const CoeffFn& a);

/// The line through (0, v0) and (T, v1).
DiscretePath linear_path(std::shared_ptr<const Mesh> mesh, double v0, double v1, const CoeffFn& a);

/// Path sampling g at every node.
DiscretePath path_from_function(std::shared_ptr<const Mesh> mesh,
                                const std::function<double(double)>& g, const CoeffFn& a);

/// Convergence metric used throughout: sup over nodes of |x - y| plus
/// the L^1 norm of the derivative difference.
double path_distance(const DiscretePath& x, const DiscretePath& y);

/// Continuous flux at an endpoint, extrapolated linearly from the two
/// nearest cell values (cells carry only midpoint data).
double flux_at_start(const DiscretePath& path);
double flux_at_end(const DiscretePath& path);

/// Flux interpolated at every node (linear in the midpoint values,
/// extrapolated at the ends); used for emission.
std::vector<double> flux_at_nodes(const DiscretePath& path);

/// Discrete W^{1,p} norm: L^p of the midpoint values plus L^p of the
/// cell derivatives.
double w1p_norm(const DiscretePath& path, double p);

}  // namespace phibvp
