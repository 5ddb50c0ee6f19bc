#include "config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace phibvp {

namespace {

struct Value {
    enum class Type { Number, String, Bool, Array };
    Type type = Type::String;
    double num = 0.0;
    bool flag = false;
    std::string str;
    std::vector<double> arr;
    std::size_t line = 0;
};

using Section = std::map<std::string, Value>;

struct ConfigFile {
    std::map<std::string, Section> sections;

    bool has(const std::string& sec) const { return sections.count(sec) != 0; }

    const Value* find(const std::string& sec, const std::string& key) const {
        const auto s = sections.find(sec);
        if (s == sections.end()) return nullptr;
        const auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    }
};

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool parse_number(const std::string& s, double& out) {
    if (s == "inf") {
        out = std::numeric_limits<double>::infinity();
        return true;
    }
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    const auto res = std::from_chars(begin, end, out);
    return res.ec == std::errc() && res.ptr == end;
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
    throw ParseError("config line " + std::to_string(line) + ": " + msg, line);
}

Value parse_value(std::string raw, std::size_t line) {
    Value v;
    v.line = line;
    raw = trim(raw);
    if (raw.empty()) fail(line, "missing value");
    if (raw.front() == '"') {
        if (raw.size() < 2 || raw.back() != '"') fail(line, "unterminated string");
        v.type = Value::Type::String;
        v.str = raw.substr(1, raw.size() - 2);
        return v;
    }
    if (raw.front() == '[') {
        if (raw.back() != ']') fail(line, "unterminated array");
        v.type = Value::Type::Array;
        std::string body = raw.substr(1, raw.size() - 2);
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            double d;
            if (!parse_number(item, d)) fail(line, "array element '" + item + "' is not a number");
            v.arr.push_back(d);
        }
        return v;
    }
    if (raw == "true" || raw == "false") {
        v.type = Value::Type::Bool;
        v.flag = raw == "true";
        return v;
    }
    double d;
    if (parse_number(raw, d)) {
        v.type = Value::Type::Number;
        v.num = d;
        return v;
    }
    v.type = Value::Type::String;  // bare word (e.g. kind = dirichlet)
    v.str = raw;
    return v;
}

ConfigFile parse_config(const std::string& text) {
    ConfigFile cfg;
    std::istringstream in(text);
    std::string line;
    std::string current;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // strip comments outside quotes
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') quoted = !quoted;
            if (!quoted && (line[i] == '#' || line[i] == ';')) {
                line = line.substr(0, i);
                break;
            }
        }
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(lineno, "unterminated section header");
            current = trim(line.substr(1, line.size() - 2));
            if (current.empty()) fail(lineno, "empty section name");
            cfg.sections[current];
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail(lineno, "expected key = value");
        if (current.empty()) fail(lineno, "key outside any [section]");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) fail(lineno, "empty key");
        if (cfg.sections[current].count(key)) fail(lineno, "duplicate key '" + key + "'");
        cfg.sections[current][key] = parse_value(line.substr(eq + 1), lineno);
    }
    return cfg;
}

// --- typed access -----------------------------------------------------

class Reader {
public:
    explicit Reader(const ConfigFile& cfg) : cfg_(cfg) {}

    double number(const std::string& sec, const std::string& key, double fallback) {
        const Value* v = use(sec, key);
        if (!v) return fallback;
        if (v->type != Value::Type::Number) fail(v->line, "'" + key + "' must be a number");
        return v->num;
    }

    double require_number(const std::string& sec, const std::string& key) {
        const Value* v = use(sec, key);
        if (!v) throw ParseError("config: missing required key '" + key + "' in [" + sec + "]", 0);
        if (v->type != Value::Type::Number) fail(v->line, "'" + key + "' must be a number");
        return v->num;
    }

    bool boolean(const std::string& sec, const std::string& key, bool fallback) {
        const Value* v = use(sec, key);
        if (!v) return fallback;
        if (v->type == Value::Type::Bool) return v->flag;
        if (v->type == Value::Type::String) {
            if (v->str == "on" || v->str == "auto") return true;
            if (v->str == "off") return false;
        }
        fail(v->line, "'" + key + "' must be true/false (or on/auto/off)");
    }

    std::string text(const std::string& sec, const std::string& key, const std::string& fallback) {
        const Value* v = use(sec, key);
        if (!v) return fallback;
        if (v->type == Value::Type::Number) {
            std::ostringstream os;
            os.precision(17);
            os << v->num;
            return os.str();
        }
        if (v->type != Value::Type::String) fail(v->line, "'" + key + "' must be text");
        return v->str;
    }

    std::string require_text(const std::string& sec, const std::string& key) {
        const Value* v = use(sec, key);
        if (!v) throw ParseError("config: missing required key '" + key + "' in [" + sec + "]", 0);
        return text(sec, key, "");
    }

    std::vector<double> array(const std::string& sec, const std::string& key,
                              std::vector<double> fallback) {
        const Value* v = use(sec, key);
        if (!v) return fallback;
        if (v->type != Value::Type::Array) fail(v->line, "'" + key + "' must be an array [..]");
        return v->arr;
    }

    bool present(const std::string& sec, const std::string& key) const {
        return cfg_.find(sec, key) != nullptr;
    }

    Expression expression(const std::string& sec, const std::string& key,
                          std::initializer_list<std::string> vars) {
        const std::string src = require_text(sec, key);
        return parse_in_context(src, sec, key, vars);
    }

    Expression parse_in_context(const std::string& src, const std::string& sec,
                                const std::string& key,
                                std::initializer_list<std::string> vars) {
        try {
            return Expression::parse(src, vars);
        } catch (const ParseError& e) {
            throw ParseError("in [" + sec + "] " + key + " = \"" + src + "\": " + e.what() +
                                 " (byte offset " + std::to_string(e.offset()) + ")",
                             e.offset());
        }
    }

    void check_unused() const {
        for (const auto& [sec, keys] : cfg_.sections) {
            if (!known_sections_.count(sec))
                throw ParseError("config: unknown section [" + sec + "]", 0);
            for (const auto& [key, val] : keys)
                if (!used_.count(sec + "." + key))
                    fail(val.line, "unknown key '" + key + "' in [" + sec + "]");
        }
    }

    void note_section(const std::string& sec) { known_sections_.insert(sec); }

private:
    const Value* use(const std::string& sec, const std::string& key) {
        known_sections_.insert(sec);
        used_.insert(sec + "." + key);
        return cfg_.find(sec, key);
    }

    const ConfigFile& cfg_;
    std::set<std::string> used_;
    std::set<std::string> known_sections_;
};

}  // namespace

LoadedProblem load_problem_text(const std::string& text) {
    const ConfigFile cfg = parse_config(text);
    Reader r(cfg);
    LoadedProblem out;
    BvpProblem& prob = out.problem;

    // [phi]
    const std::string phi_kind = r.text("phi", "kind", "identity");
    if (phi_kind == "identity") {
        prob.phi = Homeomorphism::identity();
        r.number("phi", "inversion_tol", 1e-12);
    } else if (phi_kind == "power") {
        prob.phi = Homeomorphism::power(r.require_number("phi", "r"));
        r.number("phi", "inversion_tol", 1e-12);
    } else if (phi_kind == "custom") {
        Expression fwd = r.expression("phi", "expr", {"y"});
        std::optional<Expression> inv;
        if (r.present("phi", "inverse")) inv = r.expression("phi", "inverse", {"v"});
        prob.phi = Homeomorphism::custom(std::move(fwd), std::move(inv),
                                         r.number("phi", "inversion_tol", 1e-12));
    } else {
        throw ParseError("config: [phi] kind must be identity, power, or custom", 0);
    }

    // [coefficient]
    prob.coeff.a = r.expression("coefficient", "a", {"t", "x"});
    prob.coeff.h = r.expression("coefficient", "h", {"t"});
    prob.coeff.p = r.number("coefficient", "p", 2.0);
    prob.coeff.singular_points = r.array("coefficient", "singular", {});
    if (!(prob.coeff.p > 1.0))
        throw ParseError("config: [coefficient] p must exceed 1", 0);

    // [rhs]
    prob.f = r.expression("rhs", "f", {"t", "x", "y"});

    // [nagumo] (optional)
    if (cfg.has("nagumo")) {
        NagumoData ng;
        ng.H = r.number("nagumo", "H", 1.0);
        ng.psi = r.expression("nagumo", "psi", {"s"});
        ng.l = r.expression("nagumo", "l", {"t"});
        ng.mu = r.expression("nagumo", "mu", {"t"});
        ng.q = r.number("nagumo", "q", std::numeric_limits<double>::infinity());
        prob.nagumo = std::move(ng);
    }

    // [boundary]
    const std::string bkind = r.require_text("boundary", "kind");
    if (bkind == "dirichlet") {
        prob.boundary = BoundarySpec::dirichlet(r.require_number("boundary", "nu1"),
                                                r.require_number("boundary", "nu2"));
    } else if (bkind == "periodic") {
        prob.boundary = BoundarySpec::periodic();
    } else if (bkind == "neumann") {
        prob.boundary = BoundarySpec::neumann(r.require_number("boundary", "nu1"),
                                              r.require_number("boundary", "nu2"));
    } else if (bkind == "sturm_liouville") {
        prob.boundary = BoundarySpec::sturm_liouville(
            r.require_number("boundary", "l1"), r.require_number("boundary", "m1"),
            r.require_number("boundary", "nu1"), r.require_number("boundary", "l2"),
            r.require_number("boundary", "m2"), r.require_number("boundary", "nu2"));
    } else if (bkind == "functional") {
        prob.boundary = BoundarySpec::functional(
            r.expression("boundary", "g", {"u", "v", "w", "z"}),
            r.expression("boundary", "rho", {"r"}));
    } else if (bkind == "separated") {
        prob.boundary = BoundarySpec::separated(r.expression("boundary", "p", {"s", "w"}),
                                                r.expression("boundary", "q", {"s", "w"}));
    } else {
        throw ParseError("config: unknown boundary kind '" + bkind + "'", 0);
    }

    // [pair] (optional; numbers or expressions in t)
    if (cfg.has("pair")) {
        prob.lower = r.expression("pair", "alpha", {"t"});
        prob.upper = r.expression("pair", "beta", {"t"});
    }

    // [growth] (optional)
    if (cfg.has("growth")) {
        GrowthAudit ga;
        ga.tau = r.require_number("growth", "tau");
        ga.delta = r.require_number("growth", "delta");
        prob.growth = ga;
    }

    // [mesh]
    prob.T = r.number("mesh", "T", 1.0);
    const auto n = static_cast<std::size_t>(r.number("mesh", "n", 1024.0));
    const double grading = r.number("mesh", "grading", 3.0);
    const std::vector<double> mesh_singular =
        r.array("mesh", "singular", prob.coeff.singular_points);
    out.mesh = Mesh::build(prob.T, mesh_singular, n, grading);

    // [solver]
    out.options.tol = r.number("solver", "tol", 1e-8);
    out.options.max_iter = static_cast<int>(r.number("solver", "max_iter", 500.0));
    out.options.damping = r.number("solver", "damping", 0.5);
    out.options.anderson = r.boolean("solver", "anderson", false);
    out.options.xi_tol = r.number("solver", "xi_tol", 1e-12);
    out.options.bc_tol = r.number("solver", "bc_tol", 1e-6);
    out.options.nu_grid = static_cast<int>(r.number("solver", "nu_grid", 33.0));
    out.options.truncation = r.boolean("solver", "truncation", true);

    r.check_unused();
    prob.finalize();
    return out;
}

LoadedProblem load_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_problem_text(buf.str());
}

}  // namespace phibvp
