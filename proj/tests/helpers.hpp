#pragma once

#include <limits>
#include <string>
#include <vector>

#include "problem.hpp"

namespace phibvp::testing {

inline BvpProblem make_dirichlet(const std::string& a, const std::string& h, double p,
                                 const std::string& f, Homeomorphism phi, double nu1, double nu2,
                                 std::vector<double> singular = {}, double T = 1.0) {
    BvpProblem prob;
    prob.T = T;
    prob.phi = std::move(phi);
    prob.coeff.a = Expression::parse(a, {"t", "x"});
    prob.coeff.h = Expression::parse(h, {"t"});
    prob.coeff.p = p;
    prob.coeff.singular_points = std::move(singular);
    prob.f = Expression::parse(f, {"t", "x", "y"});
    prob.boundary = BoundarySpec::dirichlet(nu1, nu2);
    prob.finalize();
    return prob;
}

inline void with_pair(BvpProblem& prob, const std::string& alpha, const std::string& beta) {
    prob.lower = Expression::parse(alpha, {"t"});
    prob.upper = Expression::parse(beta, {"t"});
}

inline void with_nagumo(BvpProblem& prob, double H, const std::string& psi, const std::string& l,
                        const std::string& mu,
                        double q = std::numeric_limits<double>::infinity()) {
    NagumoData ng;
    ng.H = H;
    ng.psi = Expression::parse(psi, {"s"});
    ng.l = Expression::parse(l, {"t"});
    ng.mu = Expression::parse(mu, {"t"});
    ng.q = q;
    prob.nagumo = std::move(ng);
}

}  // namespace phibvp::testing
