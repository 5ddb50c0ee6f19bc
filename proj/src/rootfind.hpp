#pragma once

#include <cmath>
#include <functional>
#include <limits>

#include "errors.hpp"

namespace phibvp {

/// Result of a monotone scalar solve.
struct RootResult {
    double x = 0.0;
    double residual = 0.0;  // f(x) - target
    int evaluations = 0;
    // the bracket collapsed to adjacent doubles: the result is as good
    // as the arithmetic allows even if |residual| > tol
    bool interval_exhausted = false;
};

/// Expands [lo, hi] geometrically until f(lo) - target and f(hi) - target
/// have opposite (or zero) signs. `f` must be nondecreasing. Throws
/// NumericError once the bracket magnitude exceeds `limit` (the function
/// apparently never attains `target`, e.g. a custom map that is not onto).
inline void expand_bracket_increasing(const std::function<double(double)>& f, double target,
                                      double& lo, double& hi,
                                      double limit = 1.8446744073709552e19 /* 2^64 */) {
    if (lo > hi) std::swap(lo, hi);
    double flo = f(lo) - target;
    double fhi = f(hi) - target;
    while (flo > 0.0 || fhi < 0.0) {
        const double width = std::fmax(hi - lo, 1.0);
        if (flo > 0.0) {
            lo -= width;
            flo = f(lo) - target;
        }
        if (fhi < 0.0) {
            hi += width;
            fhi = f(hi) - target;
        }
        if (std::fabs(lo) > limit || std::fabs(hi) > limit)
            throw NumericError("bracket expansion exceeded 2^64; function never reaches target");
    }
}

/// Bisection on a nondecreasing function, stopping when
/// |f(x) - target| <= tol or the interval is exhausted to machine
/// precision. The initial [lo, hi] must bracket the target.
inline RootResult bisect_increasing(const std::function<double(double)>& f, double target,
                                    double lo, double hi, double tol, int max_iter = 400) {
    RootResult best;
    best.x = 0.5 * (lo + hi);
    best.residual = std::numeric_limits<double>::infinity();
    for (int it = 0; it < max_iter; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) {
            best.interval_exhausted = true;
            break;
        }
        const double r = f(mid) - target;
        ++best.evaluations;
        if (std::fabs(r) < std::fabs(best.residual)) {
            best.x = mid;
            best.residual = r;
        }
        if (std::fabs(r) <= tol) return best;
        if (r < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return best;
}

/// Safeguarded regula falsi (Illinois) on a bracketing interval;
/// falls back to the midpoint whenever the secant step leaves the
/// bracket. Requires f(lo) <= target <= f(hi) up to sign.
inline RootResult illinois(const std::function<double(double)>& f, double target, double lo,
                           double hi, double tol, int max_iter = 200) {
    double fa = f(lo) - target;
    double fb = f(hi) - target;
    RootResult best;
    best.evaluations = 2;
    best.x = std::fabs(fa) < std::fabs(fb) ? lo : hi;
    best.residual = std::fabs(fa) < std::fabs(fb) ? fa : fb;
    if (std::fabs(best.residual) <= tol) return best;
    for (int it = 0; it < max_iter; ++it) {
        double x = fb != fa ? (lo * fb - hi * fa) / (fb - fa) : 0.5 * (lo + hi);
        if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
        if (x == lo || x == hi) {
            best.interval_exhausted = true;
            break;
        }
        const double fx = f(x) - target;
        ++best.evaluations;
        if (std::fabs(fx) < std::fabs(best.residual)) {
            best.x = x;
            best.residual = fx;
        }
        if (std::fabs(fx) <= tol) return best;
        if (fx * fb < 0.0) {
            lo = hi;
            fa = fb;
        } else {
            fa *= 0.5;  // stale-side halving keeps the secant moving
        }
        hi = x;
        fb = fx;
        if (lo > hi) {
            std::swap(lo, hi);
            std::swap(fa, fb);
        }
    }
    return best;
}

/// Full monotone solve: bracket expansion, then Illinois with a
/// bisection fallback if the secant family stalls.
inline RootResult solve_increasing(const std::function<double(double)>& f, double target,
                                   double lo, double hi, double tol) {
    expand_bracket_increasing(f, target, lo, hi);
    RootResult r = illinois(f, target, lo, hi, tol);
    if (std::fabs(r.residual) > tol && !r.interval_exhausted)
        r = bisect_increasing(f, target, lo, hi, tol);
    return r;
}

}  // namespace phibvp
