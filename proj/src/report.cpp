#include "report.hpp"

#include <charconv>

namespace phibvp {

std::string format_real(double v) {
    // locale-independent 17-significant-digit form (round-trip exact)
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string solution_csv(const DiscretePath& path, const BvpProblem& plain_prob) {
    const Mesh& m = *path.mesh;

    DiscretePath plain = path;
    plain.ax_values = compute_Ax(path, *plain_prob.model);
    const std::vector<double> ax_nodes = flux_at_nodes(plain);
    const std::vector<double> res_nodes = residual_at_nodes(path, plain_prob);

    std::string out = "t,x,dx,Ax,local_residual\n";
    for (std::size_t i = 0; i < m.node_count(); ++i) {
        double dx;
        if (i == 0)
            dx = path.cell_derivatives[0];
        else if (i == m.cells())
            dx = path.cell_derivatives[m.cells() - 1];
        else
            dx = 0.5 * (path.cell_derivatives[i - 1] + path.cell_derivatives[i]);
        out += format_real(m.node(i));
        out += ',';
        out += format_real(path.node_values[i]);
        out += ',';
        out += format_real(dx);
        out += ',';
        out += format_real(ax_nodes[i]);
        out += ',';
        out += format_real(res_nodes[i]);
        out += '\n';
    }
    return out;
}

std::string profile_csv(const std::vector<std::pair<double, double>>& profile) {
    std::string out = "nu,s\n";
    for (const auto& [nu, s] : profile) {
        out += format_real(nu);
        out += ',';
        out += format_real(s);
        out += '\n';
    }
    return out;
}

}  // namespace phibvp
