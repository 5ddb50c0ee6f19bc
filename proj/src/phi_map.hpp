#pragma once

#include <memory>
#include <optional>
#include <string>

#include "expr.hpp"

namespace phibvp {

/// A strictly increasing homeomorphism of the real line applied to the
/// flux a(t,x)*x'. The power kind is |y|^(r-2)*y with r > 1; custom
/// kinds are user-declared monotone expressions in y, optionally with a
/// closed-form inverse in v. Values are immutable and shareable.
class Homeomorphism {
public:
    enum class Kind { Identity, Power, Custom };

    Homeomorphism() = default;  // identity

    static Homeomorphism identity();
    static Homeomorphism power(double r);
    static Homeomorphism custom(Expression forward, std::optional<Expression> inverse,
                                double inversion_tolerance = 1e-12);

    Kind kind() const { return kind_; }
    double exponent() const { return r_; }
    double inversion_tolerance() const { return inversion_tol_; }

    /// Forward map. Throws EvalError on non-finite input.
    double eval(double y) const;

    /// Inverse map: returns y with |eval(y) - v| <= tol * max(1, |v|).
    /// Uses the closed-form inverse when declared, otherwise bracket
    /// expansion from [-1, 1] plus bisection on the monotone map; a
    /// bracket blow-up signals a declared map that is not onto.
    double invert(double v) const;

    std::string describe() const;

private:
    Kind kind_ = Kind::Identity;
    double r_ = 2.0;
    double inversion_tol_ = 1e-12;
    std::shared_ptr<const Expression> forward_;
    std::shared_ptr<const Expression> inverse_;
};

}  // namespace phibvp
