#include "mesh.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace phibvp {

namespace {

constexpr double kSingularMatchTol = 1e-12;

struct Segment {
    double lo, hi;
    bool sing_lo, sing_hi;
    std::size_t cells = 0;
    double length() const { return hi - lo; }
};

// Appends the interior nodes plus the right endpoint of a single graded
// span to `out`; the left endpoint is assumed already present.
void emit_span(std::vector<double>& out, const Segment& seg, double g) {
    const std::size_t m = seg.cells;
    const double len = seg.length();
    const auto graded = [g](double u) { return std::pow(u, g); };
    if (seg.sing_lo && seg.sing_hi) {
        const std::size_t m_left = m / 2;
        const std::size_t m_right = m - m_left;
        const double half = 0.5 * len;
        for (std::size_t j = 1; j <= m_left; ++j)
            out.push_back(seg.lo + half * graded(static_cast<double>(j) / m_left));
        for (std::size_t j = 1; j <= m_right; ++j)
            out.push_back(seg.hi - half * graded(1.0 - static_cast<double>(j) / m_right));
    } else if (seg.sing_lo) {
        for (std::size_t j = 1; j <= m; ++j)
            out.push_back(seg.lo + len * graded(static_cast<double>(j) / m));
    } else if (seg.sing_hi) {
        for (std::size_t j = 1; j <= m; ++j)
            out.push_back(seg.hi - len * graded(1.0 - static_cast<double>(j) / m));
    } else {
        for (std::size_t j = 1; j <= m; ++j)
            out.push_back(seg.lo + len * static_cast<double>(j) / m);
    }
    out.back() = seg.hi;  // exact segment boundary
}

}  // namespace

std::shared_ptr<const Mesh> Mesh::build(double T, const std::vector<double>& singular_points,
                                        std::size_t n, double grading_exponent) {
    if (!(T > 0.0)) throw Error("mesh requires T > 0");
    if (n < 4) throw Error("mesh requires at least 4 cells, got " + std::to_string(n));
    if (!(grading_exponent >= 1.0)) throw Error("grading exponent must be >= 1");

    std::set<double> sing;
    for (double s : singular_points) {
        if (s < -kSingularMatchTol || s > T + kSingularMatchTol)
            throw Error("singular point " + std::to_string(s) + " outside [0, T]");
        sing.insert(std::clamp(s, 0.0, T));
    }

    // Segment boundaries: endpoints plus interior singular points.
    std::vector<double> bounds{0.0};
    for (double s : sing)
        if (s > kSingularMatchTol && s < T - kSingularMatchTol) bounds.push_back(s);
    bounds.push_back(T);

    const auto is_sing = [&](double t) {
        for (double s : sing)
            if (std::fabs(t - s) <= kSingularMatchTol) return true;
        return false;
    };

    std::vector<Segment> segs;
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i)
        segs.push_back({bounds[i], bounds[i + 1], is_sing(bounds[i]), is_sing(bounds[i + 1])});

    // Allocate cells proportionally to segment length, honoring minimums.
    std::size_t assigned = 0;
    for (auto& seg : segs) {
        const std::size_t min_cells = (seg.sing_lo && seg.sing_hi) ? 2 : 1;
        seg.cells = std::max<std::size_t>(
            min_cells, static_cast<std::size_t>(std::lround(n * seg.length() / T)));
        assigned += seg.cells;
    }
    while (assigned != n) {
        auto widest = std::max_element(segs.begin(), segs.end(),
                                       [](const Segment& a, const Segment& b) {
                                           return a.length() / a.cells < b.length() / b.cells;
                                       });
        auto finest = std::max_element(segs.begin(), segs.end(),
                                       [](const Segment& a, const Segment& b) {
                                           return a.length() / a.cells > b.length() / b.cells;
                                       });
        if (assigned < n) {
            ++widest->cells;
            ++assigned;
        } else {
            const std::size_t min_cells = (finest->sing_lo && finest->sing_hi) ? 2 : 1;
            if (finest->cells <= min_cells)
                throw Error("mesh has too few cells for its singular-point layout");
            --finest->cells;
            --assigned;
        }
    }

    auto mesh = std::shared_ptr<Mesh>(new Mesh());
    mesh->T_ = T;
    mesh->grading_ = grading_exponent;
    mesh->singular_.assign(sing.begin(), sing.end());
    mesh->nodes_.reserve(n + 1);
    mesh->nodes_.push_back(0.0);
    for (const auto& seg : segs) emit_span(mesh->nodes_, seg, grading_exponent);
    mesh->nodes_.back() = T;

    for (std::size_t i = 0; i + 1 < mesh->nodes_.size(); ++i) {
        if (!(mesh->nodes_[i] < mesh->nodes_[i + 1]))
            throw Error("mesh nodes collapsed; increase n or lower the grading exponent");
        mesh->midpoints_.push_back(0.5 * (mesh->nodes_[i] + mesh->nodes_[i + 1]));
        mesh->widths_.push_back(mesh->nodes_[i + 1] - mesh->nodes_[i]);
    }
    return mesh;
}

std::size_t Mesh::cell_of(double t) const {
    if (t <= nodes_.front()) return 0;
    if (t >= nodes_.back()) return cells() - 1;
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
    return static_cast<std::size_t>(it - nodes_.begin()) - 1;
}

double integrate(const Mesh& mesh, const CellFunction& w) {
    if (w.size() != mesh.cells())
        throw Error("cell function size " + std::to_string(w.size()) +
                    " does not match mesh cell count " + std::to_string(mesh.cells()));
    double sum = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!std::isfinite(w[i]))
            throw NumericError("non-finite integrand value in cell " + std::to_string(i) +
                               " (midpoint t=" + std::to_string(mesh.midpoint(i)) + ")");
        sum += w[i] * mesh.width(i);
    }
    return sum;
}

double lp_norm(const Mesh& mesh, const CellFunction& w, double p) {
    if (w.size() != mesh.cells()) throw Error("cell function size does not match mesh");
    if (std::isinf(p)) {
        double m = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (!std::isfinite(w[i]))
                throw NumericError("non-finite value in cell " + std::to_string(i));
            m = std::fmax(m, std::fabs(w[i]));
        }
        return m;
    }
    if (!(p >= 1.0)) throw Error("lp_norm requires p >= 1");
    double sum = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!std::isfinite(w[i]))
            throw NumericError("non-finite value in cell " + std::to_string(i));
        sum += std::pow(std::fabs(w[i]), p) * mesh.width(i);
    }
    return std::pow(sum, 1.0 / p);
}

}  // namespace phibvp
