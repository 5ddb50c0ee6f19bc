#include "phi_map.hpp"

#include <cmath>

#include "rootfind.hpp"

namespace phibvp {

Homeomorphism Homeomorphism::identity() {
    Homeomorphism h;
    h.kind_ = Kind::Identity;
    return h;
}

Homeomorphism Homeomorphism::power(double r) {
    if (!(r > 1.0)) throw Error("power homeomorphism requires exponent r > 1");
    Homeomorphism h;
    h.kind_ = Kind::Power;
    h.r_ = r;
    return h;
}

Homeomorphism Homeomorphism::custom(Expression forward, std::optional<Expression> inverse,
                                    double inversion_tolerance) {
    if (!(inversion_tolerance > 0.0)) throw Error("inversion tolerance must be positive");
    Homeomorphism h;
    h.kind_ = Kind::Custom;
    h.forward_ = std::make_shared<Expression>(std::move(forward));
    if (inverse) h.inverse_ = std::make_shared<Expression>(std::move(*inverse));
    h.inversion_tol_ = inversion_tolerance;
    return h;
}

double Homeomorphism::eval(double y) const {
    if (!std::isfinite(y)) throw EvalError("homeomorphism evaluated at a non-finite value");
    switch (kind_) {
        case Kind::Identity:
            return y;
        case Kind::Power:
            if (y == 0.0) return 0.0;
            return std::pow(std::fabs(y), r_ - 2.0) * y;
        case Kind::Custom: {
            const double vals[1] = {y};
            return forward_->eval(vals);
        }
    }
    return y;
}

double Homeomorphism::invert(double v) const {
    if (!std::isfinite(v)) throw EvalError("homeomorphism inverse of a non-finite value");
    switch (kind_) {
        case Kind::Identity:
            return v;
        case Kind::Power: {
            if (v == 0.0) return 0.0;
            const double mag = std::pow(std::fabs(v), 1.0 / (r_ - 1.0));
            return v > 0.0 ? mag : -mag;
        }
        case Kind::Custom:
            break;
    }
    if (inverse_) {
        const double vals[1] = {v};
        return inverse_->eval(vals);
    }
    const auto fwd = [this](double y) { return eval(y); };
    const double tol = inversion_tol_ * std::fmax(1.0, std::fabs(v));
    const RootResult root = solve_increasing(fwd, v, -1.0, 1.0, tol);
    if (std::fabs(root.residual) > tol && !root.interval_exhausted)
        throw NumericError("inverse solve stalled; declared map may not be a homeomorphism");
    return root.x;
}

std::string Homeomorphism::describe() const {
    switch (kind_) {
        case Kind::Identity: return "identity";
        case Kind::Power: return "power(r=" + std::to_string(r_) + ")";
        case Kind::Custom: return "custom(" + forward_->source() + ")";
    }
    return "?";
}

}  // namespace phibvp
