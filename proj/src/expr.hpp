#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace phibvp {

/// Node opcodes for the arithmetic expression AST.
enum class ExprOp : std::uint8_t {
    Constant,
    Variable,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Neg,
    Abs,
    Sign,
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Min,
    Max,
    Atan,
};

struct ExprNode {
    ExprOp op;
    std::int32_t a = -1;   // left / only child
    std::int32_t b = -1;   // right child (binary ops only)
    double value = 0.0;    // Constant payload
    std::int32_t slot = -1;  // Variable payload: index into the binding vector

    bool operator==(const ExprNode&) const = default;
};

/// A parsed arithmetic expression over a fixed set of named variables.
///
/// The AST is stored as a flat arena in which children always precede
/// their parents, so evaluation is a single forward pass. Instances are
/// immutable after parsing and safe to share across threads.
class Expression {
public:
    Expression() = default;

    /// Parses `src` against the grammar
    ///   expr   := term (("+"|"-") term)*
    ///   term   := factor (("*"|"/") factor)*
    ///   factor := ("-" factor) | power
    ///   power  := atom ("^" factor)?
    ///   atom   := number | ident | ident "(" expr ("," expr)* ")" | "(" expr ")"
    /// `variables` lists the identifiers the expression may reference;
    /// anything else (other than a known function name or `pi`) is an
    /// unknown-identifier error carrying the byte offset.
    static Expression parse(std::string_view src,
                            std::span<const std::string> variables);

    /// Convenience overload for initializer lists of variable names.
    static Expression parse(std::string_view src,
                            std::initializer_list<std::string> variables);

    /// Evaluates with `values[i]` bound to `variables[i]`. Throws
    /// EvalError on division by zero, log/sqrt of a negative, or a
    /// non-finite operand/result.
    double eval(std::span<const double> values) const;

    /// Fully parenthesized canonical form; parse(print()) is
    /// structurally identical to this expression.
    std::string print() const;

    bool structurally_equal(const Expression& other) const;

    const std::vector<std::string>& variables() const { return vars_; }
    const std::string& source() const { return source_; }
    bool empty() const { return nodes_.empty(); }

    /// Direct AST construction, used by tests and generated expressions.
    struct Builder {
        std::vector<ExprNode> nodes;
        std::vector<std::string> vars;

        std::int32_t constant(double v);
        std::int32_t variable(std::string_view name);
        std::int32_t unary(ExprOp op, std::int32_t a);
        std::int32_t binary(ExprOp op, std::int32_t a, std::int32_t b);
        Expression finish(std::int32_t root) const;
    };

    const std::vector<ExprNode>& nodes() const { return nodes_; }
    std::int32_t root() const { return root_; }

private:
    std::vector<ExprNode> nodes_;
    std::vector<std::string> vars_;
    std::int32_t root_ = -1;
    std::string source_;

    friend struct Builder;
};

/// True if `name` is one of the built-in function names.
bool is_expr_function(std::string_view name);

}  // namespace phibvp
