#include "expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace phibvp {

namespace {

struct FunctionInfo {
    const char* name;
    ExprOp op;
    int arity;
};

constexpr FunctionInfo kFunctions[] = {
    {"abs", ExprOp::Abs, 1},   {"sign", ExprOp::Sign, 1},
    {"sin", ExprOp::Sin, 1},   {"cos", ExprOp::Cos, 1},
    {"exp", ExprOp::Exp, 1},   {"log", ExprOp::Log, 1},
    {"sqrt", ExprOp::Sqrt, 1}, {"min", ExprOp::Min, 2},
    {"max", ExprOp::Max, 2},   {"atan", ExprOp::Atan, 1},
    {"pow", ExprOp::Pow, 2},
};

const FunctionInfo* find_function(std::string_view name) {
    for (const auto& f : kFunctions)
        if (name == f.name) return &f;
    return nullptr;
}

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    Tok kind() const { return kind_; }
    std::size_t offset() const { return tok_start_; }
    double number() const { return number_; }
    std::string_view ident() const { return ident_; }

    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        tok_start_ = pos_;
        if (pos_ >= src_.size()) {
            kind_ = Tok::End;
            return;
        }
        const char c = src_[pos_];
        // U+2212 (minus sign) tolerated as '-'
        if (static_cast<unsigned char>(c) == 0xE2 && pos_ + 2 < src_.size() &&
            static_cast<unsigned char>(src_[pos_ + 1]) == 0x88 &&
            static_cast<unsigned char>(src_[pos_ + 2]) == 0x92) {
            kind_ = Tok::Minus;
            pos_ += 3;
            return;
        }
        switch (c) {
            case '+': kind_ = Tok::Plus; ++pos_; return;
            case '-': kind_ = Tok::Minus; ++pos_; return;
            case '*': kind_ = Tok::Star; ++pos_; return;
            case '/': kind_ = Tok::Slash; ++pos_; return;
            case '^': kind_ = Tok::Caret; ++pos_; return;
            case '(': kind_ = Tok::LParen; ++pos_; return;
            case ')': kind_ = Tok::RParen; ++pos_; return;
            case ',': kind_ = Tok::Comma; ++pos_; return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            lex_number();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = pos_;
            while (end < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_'))
                ++end;
            ident_ = src_.substr(pos_, end - pos_);
            kind_ = Tok::Ident;
            pos_ = end;
            return;
        }
        throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
    }

private:
    void lex_number() {
        std::size_t end = pos_;
        while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) ++end;
        if (end < src_.size() && src_[end] == '.') {
            ++end;
            while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) ++end;
        }
        if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
            std::size_t exp_end = end + 1;
            if (exp_end < src_.size() && (src_[exp_end] == '+' || src_[exp_end] == '-')) ++exp_end;
            if (exp_end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[exp_end]))) {
                ++exp_end;
                while (exp_end < src_.size() &&
                       std::isdigit(static_cast<unsigned char>(src_[exp_end])))
                    ++exp_end;
                end = exp_end;
            }
        }
        double v = 0.0;
        const auto res = std::from_chars(src_.data() + pos_, src_.data() + end, v);
        if (res.ec != std::errc() || res.ptr != src_.data() + end)
            throw ParseError("malformed number", pos_);
        number_ = v;
        kind_ = Tok::Number;
        pos_ = end;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t tok_start_ = 0;
    Tok kind_ = Tok::End;
    double number_ = 0.0;
    std::string_view ident_;
};

class Parser {
public:
    Parser(std::string_view src, std::span<const std::string> variables)
        : lex_(src), vars_(variables) {}

    Expression::Builder take_builder() { return std::move(builder_); }

    std::int32_t parse_root() {
        const std::int32_t root = parse_expr();
        if (lex_.kind() != Tok::End)
            throw ParseError("trailing input after expression", lex_.offset());
        return root;
    }

private:
    std::int32_t parse_expr() {
        std::int32_t lhs = parse_term();
        while (lex_.kind() == Tok::Plus || lex_.kind() == Tok::Minus) {
            const ExprOp op = lex_.kind() == Tok::Plus ? ExprOp::Add : ExprOp::Sub;
            lex_.advance();
            lhs = builder_.binary(op, lhs, parse_term());
        }
        return lhs;
    }

    std::int32_t parse_term() {
        std::int32_t lhs = parse_factor();
        while (lex_.kind() == Tok::Star || lex_.kind() == Tok::Slash) {
            const ExprOp op = lex_.kind() == Tok::Star ? ExprOp::Mul : ExprOp::Div;
            lex_.advance();
            lhs = builder_.binary(op, lhs, parse_factor());
        }
        return lhs;
    }

    std::int32_t parse_factor() {
        if (lex_.kind() == Tok::Minus) {
            lex_.advance();
            return builder_.unary(ExprOp::Neg, parse_factor());
        }
        return parse_power();
    }

    std::int32_t parse_power() {
        const std::int32_t base = parse_atom();
        if (lex_.kind() == Tok::Caret) {
            lex_.advance();
            return builder_.binary(ExprOp::Pow, base, parse_factor());
        }
        return base;
    }

    std::int32_t parse_atom() {
        switch (lex_.kind()) {
            case Tok::Number: {
                const double v = lex_.number();
                lex_.advance();
                return builder_.constant(v);
            }
            case Tok::LParen: {
                lex_.advance();
                const std::int32_t inner = parse_expr();
                expect(Tok::RParen, "expected ')'");
                return inner;
            }
            case Tok::Ident:
                return parse_ident();
            case Tok::End:
                throw ParseError("unexpected end of expression", lex_.offset());
            default:
                throw ParseError("unexpected token", lex_.offset());
        }
    }

    std::int32_t parse_ident() {
        const std::string name(lex_.ident());
        const std::size_t name_offset = lex_.offset();
        lex_.advance();
        if (lex_.kind() == Tok::LParen) {
            const FunctionInfo* fn = find_function(name);
            if (!fn)
                throw ParseError("unknown function '" + name + "'", name_offset);
            lex_.advance();
            std::vector<std::int32_t> args;
            args.push_back(parse_expr());
            while (lex_.kind() == Tok::Comma) {
                lex_.advance();
                args.push_back(parse_expr());
            }
            expect(Tok::RParen, "expected ')' after function arguments");
            if (static_cast<int>(args.size()) != fn->arity)
                throw ParseError("function '" + name + "' expects " +
                                     std::to_string(fn->arity) + " argument(s), got " +
                                     std::to_string(args.size()),
                                 name_offset);
            if (fn->arity == 1) return builder_.unary(fn->op, args[0]);
            return builder_.binary(fn->op, args[0], args[1]);
        }
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (vars_[i] == name) {
                // Builder assigns slots in declaration order.
                while (builder_.vars.size() < vars_.size())
                    builder_.vars.push_back(vars_[builder_.vars.size()]);
                ExprNode node;
                node.op = ExprOp::Variable;
                node.slot = static_cast<std::int32_t>(i);
                builder_.nodes.push_back(node);
                return static_cast<std::int32_t>(builder_.nodes.size() - 1);
            }
        }
        if (name == "pi") return builder_.constant(std::numbers::pi);
        throw ParseError("unknown identifier '" + name + "'", name_offset);
    }

    void expect(Tok k, const char* msg) {
        if (lex_.kind() != k) throw ParseError(msg, lex_.offset());
        lex_.advance();
    }

    Lexer lex_;
    std::span<const std::string> vars_;
    Expression::Builder builder_;
};

void check_operand(double v, const char* what) {
    if (!std::isfinite(v)) throw EvalError(std::string("non-finite value in ") + what);
}

}  // namespace

std::int32_t Expression::Builder::constant(double v) {
    ExprNode node;
    node.op = ExprOp::Constant;
    node.value = v;
    nodes.push_back(node);
    return static_cast<std::int32_t>(nodes.size() - 1);
}

std::int32_t Expression::Builder::variable(std::string_view name) {
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (vars[i] == name) {
            ExprNode node;
            node.op = ExprOp::Variable;
            node.slot = static_cast<std::int32_t>(i);
            nodes.push_back(node);
            return static_cast<std::int32_t>(nodes.size() - 1);
        }
    }
    vars.emplace_back(name);
    ExprNode node;
    node.op = ExprOp::Variable;
    node.slot = static_cast<std::int32_t>(vars.size() - 1);
    nodes.push_back(node);
    return static_cast<std::int32_t>(nodes.size() - 1);
}

std::int32_t Expression::Builder::unary(ExprOp op, std::int32_t a) {
    ExprNode node;
    node.op = op;
    node.a = a;
    nodes.push_back(node);
    return static_cast<std::int32_t>(nodes.size() - 1);
}

std::int32_t Expression::Builder::binary(ExprOp op, std::int32_t a, std::int32_t b) {
    ExprNode node;
    node.op = op;
    node.a = a;
    node.b = b;
    nodes.push_back(node);
    return static_cast<std::int32_t>(nodes.size() - 1);
}

Expression Expression::Builder::finish(std::int32_t root) const {
    Expression e;
    e.nodes_ = nodes;
    e.vars_ = vars;
    e.root_ = root;
    e.source_ = e.print();
    return e;
}

Expression Expression::parse(std::string_view src, std::span<const std::string> variables) {
    Parser parser(src, variables);
    const std::int32_t root = parser.parse_root();
    Expression::Builder builder = parser.take_builder();
    while (builder.vars.size() < variables.size())
        builder.vars.push_back(variables[builder.vars.size()]);
    Expression e;
    e.nodes_ = std::move(builder.nodes);
    e.vars_ = std::move(builder.vars);
    e.root_ = root;
    e.source_ = std::string(src);
    if (e.nodes_.empty()) throw ParseError("empty expression", 0);
    return e;
}

Expression Expression::parse(std::string_view src, std::initializer_list<std::string> variables) {
    const std::vector<std::string> vars(variables);
    return parse(src, std::span<const std::string>(vars));
}

double Expression::eval(std::span<const double> values) const {
    if (values.size() != vars_.size())
        throw EvalError("binding count mismatch: expected " + std::to_string(vars_.size()) +
                        " values, got " + std::to_string(values.size()));
    thread_local std::vector<double> stack;
    stack.resize(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const ExprNode& n = nodes_[i];
        double& out = stack[i];
        switch (n.op) {
            case ExprOp::Constant: out = n.value; break;
            case ExprOp::Variable: out = values[static_cast<std::size_t>(n.slot)]; break;
            case ExprOp::Add: out = stack[n.a] + stack[n.b]; break;
            case ExprOp::Sub: out = stack[n.a] - stack[n.b]; break;
            case ExprOp::Mul: out = stack[n.a] * stack[n.b]; break;
            case ExprOp::Div:
                if (stack[n.b] == 0.0) throw EvalError("division by zero");
                out = stack[n.a] / stack[n.b];
                break;
            case ExprOp::Pow: out = std::pow(stack[n.a], stack[n.b]); break;
            case ExprOp::Neg: out = -stack[n.a]; break;
            case ExprOp::Abs: out = std::fabs(stack[n.a]); break;
            case ExprOp::Sign:
                out = stack[n.a] > 0.0 ? 1.0 : (stack[n.a] < 0.0 ? -1.0 : 0.0);
                break;
            case ExprOp::Sin: out = std::sin(stack[n.a]); break;
            case ExprOp::Cos: out = std::cos(stack[n.a]); break;
            case ExprOp::Exp: out = std::exp(stack[n.a]); break;
            case ExprOp::Log:
                if (stack[n.a] <= 0.0) throw EvalError("log of a non-positive value");
                out = std::log(stack[n.a]);
                break;
            case ExprOp::Sqrt:
                if (stack[n.a] < 0.0) throw EvalError("sqrt of a negative value");
                out = std::sqrt(stack[n.a]);
                break;
            case ExprOp::Min: out = std::fmin(stack[n.a], stack[n.b]); break;
            case ExprOp::Max: out = std::fmax(stack[n.a], stack[n.b]); break;
            case ExprOp::Atan: out = std::atan(stack[n.a]); break;
        }
    }
    const double result = stack[root_];
    check_operand(result, "expression result");
    return result;
}

namespace {

void print_node(const std::vector<ExprNode>& nodes, const std::vector<std::string>& vars,
                std::int32_t idx, std::string& out) {
    const ExprNode& n = nodes[static_cast<std::size_t>(idx)];
    const auto bin = [&](const char* sym) {
        out += '(';
        print_node(nodes, vars, n.a, out);
        out += sym;
        print_node(nodes, vars, n.b, out);
        out += ')';
    };
    const auto fn = [&](const char* name, bool two_args) {
        out += name;
        out += '(';
        print_node(nodes, vars, n.a, out);
        if (two_args) {
            out += ',';
            print_node(nodes, vars, n.b, out);
        }
        out += ')';
    };
    switch (n.op) {
        case ExprOp::Constant: {
            char buf[40];
            const auto res =
                std::to_chars(buf, buf + sizeof(buf), n.value, std::chars_format::general, 17);
            out.append(buf, res.ptr);
            break;
        }
        case ExprOp::Variable: out += vars[static_cast<std::size_t>(n.slot)]; break;
        case ExprOp::Add: bin("+"); break;
        case ExprOp::Sub: bin("-"); break;
        case ExprOp::Mul: bin("*"); break;
        case ExprOp::Div: bin("/"); break;
        case ExprOp::Pow: bin("^"); break;
        case ExprOp::Neg:
            out += "(-";
            print_node(nodes, vars, n.a, out);
            out += ')';
            break;
        case ExprOp::Abs: fn("abs", false); break;
        case ExprOp::Sign: fn("sign", false); break;
        case ExprOp::Sin: fn("sin", false); break;
        case ExprOp::Cos: fn("cos", false); break;
        case ExprOp::Exp: fn("exp", false); break;
        case ExprOp::Log: fn("log", false); break;
        case ExprOp::Sqrt: fn("sqrt", false); break;
        case ExprOp::Min: fn("min", true); break;
        case ExprOp::Max: fn("max", true); break;
        case ExprOp::Atan: fn("atan", false); break;
    }
}

}  // namespace

std::string Expression::print() const {
    std::string out;
    if (root_ >= 0) print_node(nodes_, vars_, root_, out);
    return out;
}

namespace {

bool subtree_equal(const std::vector<ExprNode>& an, std::int32_t ai,
                   const std::vector<ExprNode>& bn, std::int32_t bi) {
    if ((ai < 0) != (bi < 0)) return false;
    if (ai < 0) return true;
    const ExprNode& a = an[static_cast<std::size_t>(ai)];
    const ExprNode& b = bn[static_cast<std::size_t>(bi)];
    if (a.op != b.op) return false;
    if (a.op == ExprOp::Constant) return a.value == b.value;
    if (a.op == ExprOp::Variable) return a.slot == b.slot;
    return subtree_equal(an, a.a, bn, b.a) && subtree_equal(an, a.b, bn, b.b);
}

}  // namespace

bool Expression::structurally_equal(const Expression& other) const {
    if (vars_ != other.vars_) return false;
    return subtree_equal(nodes_, root_, other.nodes_, other.root_);
}

bool is_expr_function(std::string_view name) { return find_function(name) != nullptr; }

}  // namespace phibvp
