#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "phi_map.hpp"

using namespace phibvp;

namespace {

// Independent high-precision bisection oracle, kept free of the library's
// root-finding code path.
double oracle_invert(const Homeomorphism& phi, double v, double lo, double hi) {
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (phi.eval(mid) < v)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("forward evaluation") {
    CHECK(Homeomorphism::power(3.0).eval(2.0) == doctest::Approx(4.0));
    CHECK(Homeomorphism::identity().eval(-7.5) == doctest::Approx(-7.5));
    CHECK(Homeomorphism::power(1.5).eval(4.0) == doctest::Approx(2.0));
    CHECK(Homeomorphism::power(1.5).eval(0.0) == 0.0);
    CHECK(Homeomorphism::power(3.0).eval(-2.0) == doctest::Approx(-4.0));
    CHECK_THROWS_AS(Homeomorphism::power(3.0).eval(std::nan("")), EvalError);
    CHECK_THROWS_AS(Homeomorphism::power(0.9), Error);
}

TEST_CASE("inversion") {
    CHECK(Homeomorphism::power(3.0).invert(4.0) == doctest::Approx(2.0));
    CHECK(Homeomorphism::identity().invert(0.0) == 0.0);

    // custom phi(y) = y + y^3, v = 10: y* = 2 exactly (2 + 8 = 10);
    // frozen from the oracle before implementing the numeric inverse.
    const auto cubic = Homeomorphism::custom(Expression::parse("y + y^3", {"y"}), std::nullopt);
    const double oracle = oracle_invert(cubic, 10.0, 1.0, 3.0);
    CHECK(oracle == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(cubic.invert(10.0) == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(cubic.invert(-10.0) == doctest::Approx(-2.0).epsilon(1e-9));

    // declared closed-form inverse is used directly
    const auto with_inverse = Homeomorphism::custom(
        Expression::parse("y^3", {"y"}), Expression::parse("sign(v)*abs(v)^(1/3)", {"v"}));
    CHECK(with_inverse.invert(27.0) == doctest::Approx(3.0));
}

TEST_CASE("non-surjective custom map is reported") {
    const auto bounded = Homeomorphism::custom(Expression::parse("atan(y)", {"y"}), std::nullopt);
    CHECK_THROWS_AS(bounded.invert(2.0), NumericError);
}

TEST_CASE("round trip within 1e-9 relative on 1000 samples") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> ys(-20.0, 20.0);
    const Homeomorphism phis[4] = {
        Homeomorphism::identity(),
        Homeomorphism::power(3.0),
        Homeomorphism::power(1.5),
        Homeomorphism::custom(Expression::parse("y + y^3", {"y"}), std::nullopt),
    };
    for (int i = 0; i < 1000; ++i) {
        const auto& phi = phis[i % 4];
        const double y = ys(rng);
        const double v = phi.eval(y);
        const double back = phi.invert(v);
        CHECK(std::fabs(back - y) <= 1e-9 * std::fmax(1.0, std::fabs(y)));
        CHECK(std::fabs(phi.eval(phi.invert(v)) - v) <= 1e-9 * std::fmax(1.0, std::fabs(v)));
    }
}

TEST_CASE("monotonicity audit on 1000 random pairs") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ys(-50.0, 50.0);
    const Homeomorphism phis[3] = {
        Homeomorphism::power(2.5),
        Homeomorphism::power(4.0),
        Homeomorphism::custom(Expression::parse("y + sin(y)/2", {"y"}), std::nullopt),
    };
    for (int i = 0; i < 1000; ++i) {
        const auto& phi = phis[i % 3];
        double y1 = ys(rng), y2 = ys(rng);
        if (y1 == y2) continue;
        if (y1 > y2) std::swap(y1, y2);
        CHECK(phi.eval(y1) < phi.eval(y2));
    }
}
