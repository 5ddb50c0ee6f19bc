#pragma once

#include <string>
#include <vector>

#include "dirichlet.hpp"
#include "problem.hpp"

namespace phibvp {

/// Solution CSV with columns t, x, dx, Ax, local_residual (one row per
/// node; flux and residual are evaluated under the original problem).
/// Reals carry 17 significant digits so emission is byte-stable and
/// round-trip exact.
std::string solution_csv(const DiscretePath& path, const BvpProblem& plain_prob);

/// Sweep profile CSV with columns nu, s.
std::string profile_csv(const std::vector<std::pair<double, double>>& profile);

/// %.17g formatting used by every CSV writer.
std::string format_real(double v);

}  // namespace phibvp
