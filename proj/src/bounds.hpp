#pragma once

#include "mesh.hpp"

namespace phibvp {

/// Constants governing truncation and the post-solve estimates:
///   M       sup bound for |alpha|, |beta| (hence for the solution),
///   a0      max of a over [0,T] x [-M, M],
///   N       flux threshold above max{H, 2M/T} * a0 with Phi(N) > 0 > Phi(-N),
///   L_M     flux bound produced by the gauge-integral condition,
///   gamma0  = L_M / h on cells (derivative bound),
///   gamma_hat = gamma0 + |alpha'| + |beta'| (derivative clamp level).
struct AprioriBounds {
    double M = 0.0;
    double a0 = 0.0;
    double N = 0.0;
    double L_M = 0.0;
    CellFunction gamma0;
    CellFunction gamma_hat;
};

}  // namespace phibvp
