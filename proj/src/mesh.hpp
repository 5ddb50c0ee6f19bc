#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "errors.hpp"

namespace phibvp {

/// Values attached to cell midpoints (one per cell).
struct CellFunction {
    std::vector<double> values;

    CellFunction() = default;
    explicit CellFunction(std::size_t cells, double fill = 0.0) : values(cells, fill) {}

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
    double& operator[](std::size_t i) { return values[i]; }
};

/// A one-dimensional mesh on [0, T], graded toward declared singular
/// points of the coefficient envelope h so that integrands containing
/// 1/h stay quadrature-friendly. Nodes are strictly increasing with
/// exact endpoints, and cell midpoints never coincide with a singular
/// point. Immutable and shareable.
class Mesh {
public:
    /// Builds a mesh with `n` cells. Within each span between singular
    /// points the nodes follow the power grading t = (i/m)^exponent
    /// toward the singular end (uniform when no end is singular,
    /// symmetric two-sided grading when both are).
    static std::shared_ptr<const Mesh> build(double T, const std::vector<double>& singular_points,
                                             std::size_t n, double grading_exponent = 3.0);

    double T() const { return T_; }
    std::size_t cells() const { return nodes_.size() - 1; }
    std::size_t node_count() const { return nodes_.size(); }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& midpoints() const { return midpoints_; }
    const std::vector<double>& widths() const { return widths_; }
    const std::vector<double>& singular_points() const { return singular_; }
    double grading_exponent() const { return grading_; }

    double node(std::size_t i) const { return nodes_[i]; }
    double midpoint(std::size_t i) const { return midpoints_[i]; }
    double width(std::size_t i) const { return widths_[i]; }

    /// Index of the cell containing t (clamped to [0, cells-1]).
    std::size_t cell_of(double t) const;

private:
    Mesh() = default;

    double T_ = 1.0;
    double grading_ = 3.0;
    std::vector<double> nodes_;
    std::vector<double> midpoints_;
    std::vector<double> widths_;
    std::vector<double> singular_;
};

/// Composite midpoint rule: sum of w_i * width_i. Throws NumericError
/// naming the first cell whose value is non-finite.
double integrate(const Mesh& mesh, const CellFunction& w);

/// Discrete L^p norm (integral form); p may be infinity, in which case
/// the result is the max over cells of |w_i|.
double lp_norm(const Mesh& mesh, const CellFunction& w, double p);

}  // namespace phibvp
