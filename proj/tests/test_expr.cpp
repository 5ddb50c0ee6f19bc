#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "expr.hpp"

using namespace phibvp;

TEST_CASE("grammar shapes") {
    const auto e = Expression::parse("t^(1/3)", {"t"});
    // Pow(Var t, Div(1, 3))
    const auto& nodes = e.nodes();
    const ExprNode& root = nodes[static_cast<std::size_t>(e.root())];
    CHECK(root.op == ExprOp::Pow);
    CHECK(nodes[root.a].op == ExprOp::Variable);
    CHECK(nodes[root.b].op == ExprOp::Div);

    const auto e2 = Expression::parse("2*x + -y^2", {"x", "y"});
    const ExprNode& r2 = e2.nodes()[static_cast<std::size_t>(e2.root())];
    CHECK(r2.op == ExprOp::Add);
    CHECK(e2.nodes()[r2.a].op == ExprOp::Mul);
    CHECK(e2.nodes()[r2.b].op == ExprOp::Neg);
    CHECK(e2.nodes()[e2.nodes()[r2.b].a].op == ExprOp::Pow);
    // independent hand evaluation at (x, y) = (1, 2): 2*1 + -(2^2) = -2
    const double vals[2] = {1.0, 2.0};
    CHECK(e2.eval(vals) == doctest::Approx(-2.0).epsilon(1e-15));
}

TEST_CASE("caret binds tighter than unary minus and is right-associative") {
    const double x2[1] = {2.0};
    CHECK(Expression::parse("-x^2", {"x"}).eval(x2) == doctest::Approx(-4.0));
    CHECK(Expression::parse("2^-1", {}).eval({}) == doctest::Approx(0.5));
    CHECK(Expression::parse("2^3^2", {}).eval({}) == doctest::Approx(512.0));
    CHECK(Expression::parse("2^(3^2)", {}).eval({}) == doctest::Approx(512.0));
}

TEST_CASE("unknown identifier carries byte offset") {
    CHECK_THROWS_AS(Expression::parse("sigma", {"t"}), ParseError);
    try {
        Expression::parse("t + sigma*2", {"t"});
        FAIL("expected ParseError");
    } catch (const ParseError& err) {
        CHECK(err.offset() == 4);
    }
}

TEST_CASE("syntax errors") {
    CHECK_THROWS_AS(Expression::parse("2*+3", {}), ParseError);
    CHECK_THROWS_AS(Expression::parse("(1+2", {}), ParseError);
    CHECK_THROWS_AS(Expression::parse("", {}), ParseError);
    CHECK_THROWS_AS(Expression::parse("1 2", {}), ParseError);
    // wrong arity
    CHECK_THROWS_AS(Expression::parse("sin(1,2)", {}), ParseError);
    CHECK_THROWS_AS(Expression::parse("min(1)", {}), ParseError);
    CHECK_THROWS_AS(Expression::parse("foo(1)", {}), ParseError);
}

TEST_CASE("evaluation") {
    const auto phi3 = Expression::parse("abs(y)^(r-2)*y", {"y", "r"});
    const double v1[2] = {-2.0, 3.0};
    CHECK(phi3.eval(v1) == doctest::Approx(-4.0));

    const auto idexpr = Expression::parse("x+0", {"x"});
    const double v2[1] = {5.0};
    CHECK(idexpr.eval(v2) == doctest::Approx(5.0));

    CHECK(std::fabs(Expression::parse("sin(3.14159265358979)", {}).eval({})) < 1e-9);
    CHECK(Expression::parse("pi", {}).eval({}) == doctest::Approx(3.14159265358979323846));
    CHECK(Expression::parse("min(3, max(1, 2))", {}).eval({}) == doctest::Approx(2.0));
    CHECK(Expression::parse("sign(-0.5) + sign(2)", {}).eval({}) == doctest::Approx(0.0));
    CHECK(Expression::parse("pow(2, 10)", {}).eval({}) == doctest::Approx(1024.0));
}

TEST_CASE("evaluation domain errors") {
    CHECK_THROWS_AS(Expression::parse("1/x", {"x"}).eval(std::vector<double>{0.0}), EvalError);
    CHECK_THROWS_AS(Expression::parse("log(x)", {"x"}).eval(std::vector<double>{-1.0}), EvalError);
    CHECK_THROWS_AS(Expression::parse("sqrt(x)", {"x"}).eval(std::vector<double>{-4.0}), EvalError);
    // binding count mismatch
    CHECK_THROWS_AS(Expression::parse("x+y", {"x", "y"}).eval(std::vector<double>{1.0}), EvalError);
    // non-finite result
    CHECK_THROWS_AS(Expression::parse("exp(x)", {"x"}).eval(std::vector<double>{1e9}), EvalError);
}

namespace {

// Random AST generator for the print/parse round trip. Constants are kept
// non-negative so printed literals never lex back as a Neg node.
std::int32_t random_subtree(Expression::Builder& b, std::mt19937_64& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 9);
    std::uniform_real_distribution<double> cst(0.0, 8.0);
    switch (pick(rng)) {
        case 0: return b.constant(cst(rng));
        case 1: {
            std::uniform_int_distribution<int> v(0, 2);
            const char* names[3] = {"t", "x", "y"};
            return b.variable(names[v(rng)]);
        }
        case 2: return b.binary(ExprOp::Add, random_subtree(b, rng, depth - 1),
                                random_subtree(b, rng, depth - 1));
        case 3: return b.binary(ExprOp::Sub, random_subtree(b, rng, depth - 1),
                                random_subtree(b, rng, depth - 1));
        case 4: return b.binary(ExprOp::Mul, random_subtree(b, rng, depth - 1),
                                random_subtree(b, rng, depth - 1));
        case 5: return b.binary(ExprOp::Div, random_subtree(b, rng, depth - 1),
                                random_subtree(b, rng, depth - 1));
        case 6: return b.binary(ExprOp::Pow, random_subtree(b, rng, depth - 1),
                                random_subtree(b, rng, depth - 1));
        case 7: return b.unary(ExprOp::Neg, random_subtree(b, rng, depth - 1));
        case 8: {
            std::uniform_int_distribution<int> f(0, 7);
            const ExprOp ops[8] = {ExprOp::Abs, ExprOp::Sign, ExprOp::Sin, ExprOp::Cos,
                                   ExprOp::Exp, ExprOp::Log, ExprOp::Sqrt, ExprOp::Atan};
            return b.unary(ops[f(rng)], random_subtree(b, rng, depth - 1));
        }
        default: {
            std::uniform_int_distribution<int> f(0, 1);
            return b.binary(f(rng) ? ExprOp::Min : ExprOp::Max,
                            random_subtree(b, rng, depth - 1), random_subtree(b, rng, depth - 1));
        }
    }
}

}  // namespace

TEST_CASE("print/parse round trip on 500 random ASTs") {
    std::mt19937_64 rng(0x5eedf00dULL);
    for (int i = 0; i < 500; ++i) {
        Expression::Builder b;
        b.variable("t");  // fix slot order t, x, y
        b.variable("x");
        b.variable("y");
        const std::int32_t root = random_subtree(b, rng, 5);
        const Expression original = b.finish(root);
        const std::string text = original.print();
        const Expression reparsed = Expression::parse(text, original.variables());
        CHECK_MESSAGE(original.structurally_equal(reparsed), "round trip failed for: ", text);
    }
}
