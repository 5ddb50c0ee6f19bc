#pragma once

#include <map>
#include <string>

#include "dirichlet.hpp"
#include "problem.hpp"

namespace phibvp {

/// A problem declaration read from a config file: the problem itself,
/// the mesh it is discretized on, and the solver options.
struct LoadedProblem {
    BvpProblem problem;
    std::shared_ptr<const Mesh> mesh;
    SolveOptions options;
};

/// Parses the sectioned key-value config format:
///   [phi] kind, r, expr, inverse, inversion_tol
///   [coefficient] a, h, p, singular
///   [rhs] f
///   [nagumo] H, psi, l, mu, q (optional section)
///   [boundary] kind plus the kind's data
///   [pair] alpha, beta (numbers or expressions in t; optional)
///   [mesh] n, grading, singular
///   [solver] tol, max_iter, damping, anderson, xi_tol, bc_tol, nu_grid,
///            truncation
///   [growth] tau, delta (optional)
/// Unknown sections or keys are errors; diagnostics carry line numbers
/// and, for embedded expressions, the byte offset within the text.
LoadedProblem load_problem_text(const std::string& text);

/// Reads `path` and delegates to load_problem_text. Throws IoError when
/// the file cannot be read.
LoadedProblem load_problem_file(const std::string& path);

}  // namespace phibvp
