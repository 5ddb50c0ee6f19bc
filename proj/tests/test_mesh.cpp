#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "mesh.hpp"

using namespace phibvp;

namespace {

CellFunction sample(const Mesh& mesh, double (*f)(double)) {
    CellFunction w(mesh.cells());
    for (std::size_t i = 0; i < mesh.cells(); ++i) w[i] = f(mesh.midpoint(i));
    return w;
}

}  // namespace

TEST_CASE("uniform fallback") {
    const auto mesh = Mesh::build(1.0, {}, 4, 3.0);
    REQUIRE(mesh->node_count() == 5);
    const double expect[5] = {0.0, 0.25, 0.5, 0.75, 1.0};
    for (int i = 0; i < 5; ++i) CHECK(mesh->node(i) == doctest::Approx(expect[i]).epsilon(1e-15));
}

TEST_CASE("power grading toward a singular left endpoint") {
    const auto mesh = Mesh::build(1.0, {0.0}, 4, 3.0);
    REQUIRE(mesh->node_count() == 5);
    const double expect[5] = {0.0, 0.015625, 0.125, 0.421875, 1.0};
    for (int i = 0; i < 5; ++i) CHECK(mesh->node(i) == doctest::Approx(expect[i]).epsilon(1e-15));
}

TEST_CASE("two-sided grading is mirror symmetric") {
    const auto mesh = Mesh::build(2.0, {0.0, 2.0}, 8, 3.0);
    REQUIRE(mesh->node_count() == 9);
    for (std::size_t i = 0; i < mesh->node_count(); ++i)
        CHECK(mesh->node(i) + mesh->node(mesh->node_count() - 1 - i) == doctest::Approx(2.0));
}

TEST_CASE("interior singular point becomes a node") {
    const auto mesh = Mesh::build(1.0, {0.5}, 16, 3.0);
    bool found = false;
    for (double t : mesh->nodes())
        if (t == 0.5) found = true;
    CHECK(found);
    for (double m : mesh->midpoints()) CHECK(m != 0.5);
}

TEST_CASE("construction errors") {
    CHECK_THROWS_AS(Mesh::build(1.0, {}, 3, 3.0), Error);
    CHECK_THROWS_AS(Mesh::build(1.0, {2.0}, 16, 3.0), Error);
    CHECK_THROWS_AS(Mesh::build(-1.0, {}, 16, 3.0), Error);
}

TEST_CASE("midpoint quadrature") {
    const auto mesh = Mesh::build(1.0, {0.0}, 2048, 3.0);
    CHECK(integrate(*mesh, CellFunction(mesh->cells(), 1.0)) == doctest::Approx(1.0));

    // analytic values: integral of t^(-1/3) = 3/2, integral of t^(-1/5) = 5/4
    CHECK(std::fabs(integrate(*mesh, sample(*mesh, [](double t) { return std::pow(t, -1.0 / 3.0); })) -
                    1.5) < 1e-3);
    CHECK(std::fabs(integrate(*mesh, sample(*mesh, [](double t) { return std::pow(t, -0.2); })) -
                    1.25) < 1e-3);
}

TEST_CASE("non-finite integrand names the cell") {
    const auto mesh = Mesh::build(1.0, {}, 8, 3.0);
    CellFunction w(8, 1.0);
    w[3] = std::nan("");
    try {
        integrate(*mesh, w);
        FAIL("expected NumericError");
    } catch (const NumericError& err) {
        CHECK(std::string(err.what()).find("cell 3") != std::string::npos);
    }
}

TEST_CASE("lp norms") {
    const auto mesh = Mesh::build(1.0, {}, 256, 3.0);
    CHECK(lp_norm(*mesh, CellFunction(mesh->cells(), 2.0), 2.0) == doctest::Approx(2.0));
    CHECK(lp_norm(*mesh, CellFunction(mesh->cells(), -3.0),
                  std::numeric_limits<double>::infinity()) == doctest::Approx(3.0));
    CHECK(std::fabs(lp_norm(*mesh, sample(*mesh, [](double t) { return t; }), 2.0) -
                    1.0 / std::sqrt(3.0)) < 1e-3);
}

TEST_CASE("quadrature error decreases monotonically under doubling") {
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t n = 128; n <= 4096; n *= 2) {
        const auto mesh = Mesh::build(1.0, {0.0}, n, 3.0);
        const double err = std::fabs(
            integrate(*mesh, sample(*mesh, [](double t) { return std::pow(t, -1.0 / 3.0); })) - 1.5);
        CHECK(err < prev);
        prev = err;
    }
}

TEST_CASE("integrate is linear") {
    const auto mesh = Mesh::build(1.0, {0.0}, 64, 3.0);
    CellFunction w1 = sample(*mesh, [](double t) { return std::sin(5.0 * t); });
    CellFunction w2 = sample(*mesh, [](double t) { return t * t - 0.3; });
    const double a = 2.25, b = -1.75;
    CellFunction mix(mesh->cells());
    for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = a * w1[i] + b * w2[i];
    CHECK(std::fabs(integrate(*mesh, mix) -
                    (a * integrate(*mesh, w1) + b * integrate(*mesh, w2))) < 1e-12);
}

TEST_CASE("graded cell widths scale like distance^(1 - 1/exponent)") {
    const auto mesh = Mesh::build(1.0, {0.0}, 1024, 3.0);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t i = 2; i < mesh->cells() / 4; ++i) {
        const double ratio = mesh->width(i) / std::pow(mesh->midpoint(i), 2.0 / 3.0);
        lo = std::fmin(lo, ratio);
        hi = std::fmax(hi, ratio);
    }
    CHECK(hi / lo < 1.2);
}

TEST_CASE("cell lookup") {
    const auto mesh = Mesh::build(1.0, {}, 10, 3.0);
    CHECK(mesh->cell_of(-1.0) == 0);
    CHECK(mesh->cell_of(0.05) == 0);
    CHECK(mesh->cell_of(0.95) == 9);
    CHECK(mesh->cell_of(2.0) == 9);
    CHECK(mesh->cell_of(0.351) == 3);
}
