#include "rcsurf/expr.hpp"

#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <functional>
#include <numbers>
#include <unordered_map>

#include "rcsurf/errors.hpp"

namespace rcsurf::expr {

struct Node {
    Kind kind = Kind::Constant;
    Func func = Func::Sin;
    double value = 0.0;
    int var = -1;
    std::string name;
    std::shared_ptr<const Node> a;
    std::shared_ptr<const Node> b;
};

namespace {

constexpr std::string_view kFuncNames[] = {"sin",  "cos", "tan", "sinh", "cosh", "tanh",
                                           "sech", "exp", "log", "sqrt", "abs",  "sign"};

const std::shared_ptr<const Node>& zero_node() {
    static const auto n = std::make_shared<const Node>();
    return n;
}

bool is_integer(double x) { return std::isfinite(x) && std::floor(x) == x; }

// Shared by tree evaluation, the tape, and constant folding.
double apply_func(Func f, double x) {
    double r = 0.0;
    switch (f) {
        case Func::Sin: r = std::sin(x); break;
        case Func::Cos: r = std::cos(x); break;
        case Func::Tan: r = std::tan(x); break;
        case Func::Sinh: r = std::sinh(x); break;
        case Func::Cosh: r = std::cosh(x); break;
        case Func::Tanh: r = std::tanh(x); break;
        case Func::Sech: r = 1.0 / std::cosh(x); break;
        case Func::Exp: r = std::exp(x); break;
        case Func::Log:
            if (!(x > 0.0)) throw EvalDomainError("log", x);
            r = std::log(x);
            break;
        case Func::Sqrt:
            if (!(x >= 0.0)) throw EvalDomainError("sqrt", x);
            r = std::sqrt(x);
            break;
        case Func::Abs: r = std::fabs(x); break;
        case Func::Sign: r = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); break;
    }
    if (!std::isfinite(r)) throw EvalDomainError(std::string(func_name(f)), x);
    return r;
}

double apply_binary(Kind k, double x, double y) {
    double r = 0.0;
    switch (k) {
        case Kind::Add: r = x + y; break;
        case Kind::Sub: r = x - y; break;
        case Kind::Mul: r = x * y; break;
        case Kind::Div:
            if (y == 0.0) throw EvalDomainError("/", y);
            r = x / y;
            break;
        case Kind::Pow:
            if (x < 0.0 && !is_integer(y)) throw EvalDomainError("^", x);
            if (x == 0.0 && y < 0.0) throw EvalDomainError("^", x);
            r = std::pow(x, y);
            break;
        default: break;
    }
    if (!std::isfinite(r)) throw EvalDomainError(k == Kind::Pow ? "^" : "arithmetic", x);
    return r;
}

}  // namespace

std::string_view func_name(Func f) { return kFuncNames[static_cast<int>(f)]; }

std::optional<Func> func_from_name(std::string_view name) {
    for (int i = 0; i < static_cast<int>(std::size(kFuncNames)); ++i)
        if (kFuncNames[i] == name) return static_cast<Func>(i);
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// VarSet

VarSet::VarSet(std::initializer_list<std::string> names) : names_(names) {}
VarSet::VarSet(std::vector<std::string> names) : names_(std::move(names)) {}

std::optional<int> VarSet::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return static_cast<int>(i);
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Expr

Expr::Expr() : node_(zero_node()) {}

Expr::Expr(double value) {
    if (value == 0.0 && !std::signbit(value)) {
        node_ = zero_node();
        return;
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::Constant;
    n->value = value;
    node_ = std::move(n);
}

Expr Expr::variable(int index, std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Variable;
    n->var = index;
    n->name = std::move(name);
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Kind Expr::kind() const { return node_->kind; }
Func Expr::func() const { return node_->func; }
double Expr::value() const { return node_->value; }
int Expr::var_index() const { return node_->var; }
const std::string& Expr::var_name() const { return node_->name; }
Expr Expr::lhs() const { return node_->a ? Expr(node_->a) : Expr(); }
Expr Expr::rhs() const { return node_->b ? Expr(node_->b) : Expr(); }

Expr make_unary(Kind k, Func f, const Expr& a) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->func = f;
    n->a = a.node_;
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr make_binary(Kind k, const Expr& a, const Expr& b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = a.node_;
    n->b = b.node_;
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

namespace {

// Folds only when evaluation succeeds; otherwise the node is kept so the
// domain error surfaces at evaluation time.
std::optional<double> try_fold(Kind k, double x, double y) {
    try {
        return apply_binary(k, x, y);
    } catch (const Error&) {
        return std::nullopt;
    }
}

}  // namespace

Expr operator-(const Expr& a) {
    if (a.is_constant()) return Expr(-a.value());
    if (a.kind() == Kind::Negate) return a.lhs();
    return make_unary(Kind::Negate, Func::Sin, a);
}

Expr operator+(const Expr& a, const Expr& b) {
    if (a.is_constant() && b.is_constant()) {
        if (auto v = try_fold(Kind::Add, a.value(), b.value())) return Expr(*v);
    }
    if (a.is_constant(0.0)) return b;
    if (b.is_constant(0.0)) return a;
    return make_binary(Kind::Add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
    if (a.is_constant() && b.is_constant()) {
        if (auto v = try_fold(Kind::Sub, a.value(), b.value())) return Expr(*v);
    }
    if (b.is_constant(0.0)) return a;
    if (a.is_constant(0.0)) return -b;
    return make_binary(Kind::Sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
    if (a.is_constant() && b.is_constant()) {
        if (auto v = try_fold(Kind::Mul, a.value(), b.value())) return Expr(*v);
    }
    if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr();
    if (a.is_constant(1.0)) return b;
    if (b.is_constant(1.0)) return a;
    if (a.is_constant(-1.0)) return -b;
    if (b.is_constant(-1.0)) return -a;
    return make_binary(Kind::Mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
    if (a.is_constant() && b.is_constant()) {
        if (auto v = try_fold(Kind::Div, a.value(), b.value())) return Expr(*v);
    }
    if (b.is_constant(1.0)) return a;
    if (a.is_constant(0.0) && !b.is_constant(0.0)) return Expr();
    return make_binary(Kind::Div, a, b);
}

Expr pow(const Expr& base, const Expr& exponent) {
    if (base.is_constant() && exponent.is_constant()) {
        if (auto v = try_fold(Kind::Pow, base.value(), exponent.value())) return Expr(*v);
    }
    if (exponent.is_constant(1.0)) return base;
    if (exponent.is_constant(0.0)) return Expr(1.0);
    return make_binary(Kind::Pow, base, exponent);
}

Expr call(Func f, const Expr& arg) {
    if (arg.is_constant()) {
        try {
            return Expr(apply_func(f, arg.value()));
        } catch (const Error&) {
        }
    }
    return make_unary(Kind::Call, f, arg);
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
public:
    Parser(std::string_view text, const VarSet& vars, const Bindings& constants)
        : text_(text), vars_(vars), constants_(constants) {}

    Expr parse_all() {
        skip_ws();
        Expr e = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) fail("operator or end of input", "unexpected character");
        return e;
    }

private:
    std::string_view text_;
    const VarSet& vars_;
    const Bindings& constants_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& expected, const std::string& what) const {
        fail_at(pos_, expected, what);
    }

    [[noreturn]] void fail_at(std::size_t offset, const std::string& expected,
                              const std::string& what) const {
        int line = 1;
        int column = 1;
        for (std::size_t i = 0; i < offset && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw SyntaxError(offset, line, column, expected, what);
    }

    void skip_ws() {
        while (pos_ < text_.size() &&
               (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' || text_[pos_] == '\r'))
            ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool accept(char c) {
        if (peek(c)) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr parse_expr() {
        Expr lhs = parse_term();
        for (;;) {
            if (accept('+')) {
                lhs = make_binary_checked(Kind::Add, lhs, parse_term());
            } else if (accept('-')) {
                lhs = make_binary_checked(Kind::Sub, lhs, parse_term());
            } else {
                return lhs;
            }
        }
    }

    Expr parse_term() {
        Expr lhs = parse_unary();
        for (;;) {
            if (accept('*')) {
                lhs = make_binary_checked(Kind::Mul, lhs, parse_unary());
            } else if (accept('/')) {
                lhs = make_binary_checked(Kind::Div, lhs, parse_unary());
            } else {
                return lhs;
            }
        }
    }

    Expr parse_unary() {
        if (accept('-')) return -parse_unary();
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_primary();
        if (accept('^')) return make_binary_checked(Kind::Pow, base, parse_unary());
        return base;
    }

    // The parser keeps the tree exactly as written (no 0/1 absorption), so
    // printing and re-parsing reproduces the same evaluation order.
    static Expr make_binary_checked(Kind k, const Expr& a, const Expr& b) {
        if (a.is_constant() && b.is_constant()) {
            if (auto v = try_fold(k, a.value(), b.value())) return Expr(*v);
        }
        return make_binary(k, a, b);
    }

    Expr parse_primary() {
        skip_ws();
        if (pos_ >= text_.size()) fail("number, identifier, '(' or '-'", "unexpected end of input");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr inner = parse_expr();
            if (!accept(')')) fail("')'", "unbalanced parenthesis");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        fail("number, identifier, '(' or '-'", std::string("unexpected character '") + c + "'");
    }

    Expr parse_number() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
            ++pos_;
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t save = pos_;
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    ++pos_;
            } else {
                pos_ = save;
            }
        }
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (ec != std::errc() || ptr != text_.data() + pos_) fail_at(start, "number", "malformed number");
        return Expr(value);
    }

    Expr parse_identifier() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string_view name = text_.substr(start, pos_ - start);

        if (auto f = func_from_name(name)) {
            if (!accept('(')) fail("'(' after function name", "function application requires parentheses");
            Expr arg = parse_expr();
            if (!accept(')')) fail("')'", "unbalanced parenthesis");
            return call(*f, arg);
        }
        if (auto idx = vars_.index_of(name)) return Expr::variable(*idx, std::string(name));
        if (auto it = constants_.find(name); it != constants_.end()) return Expr(it->second);
        if (name == "pi") return Expr(std::numbers::pi);
        if (peek('(')) throw Error(Errc::UnknownFunction, std::string(name));
        throw Error(Errc::UnknownVariable, std::string(name));
    }
};

}  // namespace

Expr parse(std::string_view text, const VarSet& vars, const Bindings& constants) {
    return Parser(text, vars, constants).parse_all();
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

template <class VarLookup>
double eval_node(const Node& n, const VarLookup& lookup) {
    switch (n.kind) {
        case Kind::Constant: return n.value;
        case Kind::Variable: return lookup(n);
        case Kind::Negate: return -eval_node(*n.a, lookup);
        case Kind::Call: return apply_func(n.func, eval_node(*n.a, lookup));
        default: return apply_binary(n.kind, eval_node(*n.a, lookup), eval_node(*n.b, lookup));
    }
}

}  // namespace

double eval(const Expr& e, std::span<const double> values) {
    auto lookup = [&](const Node& n) {
        if (n.var < 0 || static_cast<std::size_t>(n.var) >= values.size())
            throw Error(Errc::UnknownVariable, n.name + " is not bound");
        return values[static_cast<std::size_t>(n.var)];
    };
    return eval_node(*e.id(), lookup);
}

double eval(const Expr& e, const Bindings& bindings) {
    auto lookup = [&](const Node& n) {
        auto it = bindings.find(n.name);
        if (it == bindings.end()) throw Error(Errc::UnknownVariable, n.name + " is not bound");
        return it->second;
    };
    return eval_node(*e.id(), lookup);
}

// ---------------------------------------------------------------------------
// Differentiation

namespace {

class Differentiator {
public:
    explicit Differentiator(std::function<bool(const Node&)> is_target) : is_target_(std::move(is_target)) {}

    Expr d(const Expr& e) {
        if (auto it = memo_.find(e.id()); it != memo_.end()) return it->second;
        Expr r = compute(e);
        memo_.emplace(e.id(), r);
        return r;
    }

private:
    std::function<bool(const Node&)> is_target_;
    std::unordered_map<const Node*, Expr> memo_;

    Expr compute(const Expr& e) {
        switch (e.kind()) {
            case Kind::Constant: return Expr();
            case Kind::Variable: return is_target_(*e.id()) ? Expr(1.0) : Expr();
            case Kind::Negate: return -d(e.lhs());
            case Kind::Add: return d(e.lhs()) + d(e.rhs());
            case Kind::Sub: return d(e.lhs()) - d(e.rhs());
            case Kind::Mul: {
                Expr a = e.lhs(), b = e.rhs();
                return d(a) * b + a * d(b);
            }
            case Kind::Div: {
                Expr a = e.lhs(), b = e.rhs();
                Expr da = d(a), db = d(b);
                return da / b - (a * db) / (b * b);
            }
            case Kind::Pow: {
                Expr a = e.lhs(), b = e.rhs();
                Expr da = d(a), db = d(b);
                if (db.is_constant(0.0)) {
                    if (b.is_constant()) return Expr(b.value()) * pow(a, Expr(b.value() - 1.0)) * da;
                    return b * pow(a, b - Expr(1.0)) * da;
                }
                return e * (db * call(Func::Log, a) + b * da / a);
            }
            case Kind::Call: {
                Expr a = e.lhs();
                Expr da = d(a);
                if (da.is_constant(0.0)) return Expr();
                switch (e.func()) {
                    case Func::Sin: return call(Func::Cos, a) * da;
                    case Func::Cos: return -(call(Func::Sin, a) * da);
                    case Func::Tan: return (Expr(1.0) + pow(e, Expr(2.0))) * da;
                    case Func::Sinh: return call(Func::Cosh, a) * da;
                    case Func::Cosh: return call(Func::Sinh, a) * da;
                    case Func::Tanh: return pow(call(Func::Sech, a), Expr(2.0)) * da;
                    case Func::Sech: return -(e * call(Func::Tanh, a) * da);
                    case Func::Exp: return e * da;
                    case Func::Log: return da / a;
                    case Func::Sqrt: return da / (Expr(2.0) * e);
                    case Func::Abs: return call(Func::Sign, a) * da;
                    case Func::Sign: return Expr();
                }
            }
        }
        return Expr();
    }
};

}  // namespace

Expr diff(const Expr& e, int var_index) {
    return Differentiator([var_index](const Node& n) { return n.var == var_index; }).d(e);
}

Expr diff(const Expr& e, std::string_view var_name) {
    return Differentiator([var_name](const Node& n) { return n.name == var_name; }).d(e);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

int precedence(const Node& n) {
    switch (n.kind) {
        case Kind::Add:
        case Kind::Sub: return 1;
        case Kind::Mul:
        case Kind::Div: return 2;
        case Kind::Negate: return 3;
        case Kind::Pow: return 4;
        case Kind::Constant: return (n.value < 0.0 || std::signbit(n.value)) ? 0 : 5;
        default: return 5;
    }
}

std::string format_number(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

void print_node(const Node& n, std::string& out);

void print_child(const Node& child, int min_prec, std::string& out) {
    if (precedence(child) < min_prec) {
        out += '(';
        print_node(child, out);
        out += ')';
    } else {
        print_node(child, out);
    }
}

void print_node(const Node& n, std::string& out) {
    switch (n.kind) {
        case Kind::Constant: out += format_number(n.value); return;
        case Kind::Variable: out += n.name; return;
        case Kind::Negate:
            out += '-';
            print_child(*n.a, 3, out);
            return;
        case Kind::Call:
            out += func_name(n.func);
            out += '(';
            print_node(*n.a, out);
            out += ')';
            return;
        case Kind::Pow:
            print_child(*n.a, 5, out);
            out += '^';
            print_child(*n.b, 3, out);
            return;
        default: {
            int p = precedence(n);
            print_child(*n.a, p, out);
            switch (n.kind) {
                case Kind::Add: out += " + "; break;
                case Kind::Sub: out += " - "; break;
                case Kind::Mul: out += '*'; break;
                default: out += '/'; break;
            }
            print_child(*n.b, p + 1, out);
            return;
        }
    }
}

void collect(const Node& n, std::unordered_map<const Node*, bool>& seen) {
    if (!seen.emplace(&n, true).second) return;
    if (n.a) collect(*n.a, seen);
    if (n.b) collect(*n.b, seen);
}

}  // namespace

std::string to_string(const Expr& e) {
    std::string out;
    print_node(*e.id(), out);
    return out;
}

std::set<std::string> free_variables(const Expr& e) {
    std::unordered_map<const Node*, bool> seen;
    collect(*e.id(), seen);
    std::set<std::string> names;
    for (auto& [n, _] : seen)
        if (n->kind == Kind::Variable) names.insert(n->name);
    return names;
}

std::size_t node_count(const Expr& e) {
    std::unordered_map<const Node*, bool> seen;
    collect(*e.id(), seen);
    return seen.size();
}

// ---------------------------------------------------------------------------
// Program

namespace {

struct InstrKey {
    Kind kind;
    Func func;
    int a;
    int b;
    std::uint64_t bits;

    bool operator==(const InstrKey&) const = default;
};

struct InstrKeyHash {
    std::size_t operator()(const InstrKey& k) const noexcept {
        std::size_t h = std::hash<std::uint64_t>()(k.bits);
        auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
        mix(static_cast<std::size_t>(k.kind));
        mix(static_cast<std::size_t>(k.func));
        mix(static_cast<std::size_t>(k.a));
        mix(static_cast<std::size_t>(k.b));
        return h;
    }
};

}  // namespace

Program::Program(std::span<const Expr> roots) {
    std::unordered_map<const Node*, int> by_ptr;
    std::unordered_map<InstrKey, int, InstrKeyHash> by_key;

    std::function<int(const Node&)> emit = [&](const Node& n) -> int {
        if (auto it = by_ptr.find(&n); it != by_ptr.end()) return it->second;
        int a = n.a ? emit(*n.a) : -1;
        int b = n.b ? emit(*n.b) : -1;
        InstrKey key{n.kind, n.kind == Kind::Call ? n.func : Func::Sin, a, b, 0};
        if (n.kind == Kind::Constant) key.bits = std::bit_cast<std::uint64_t>(n.value);
        if (n.kind == Kind::Variable) key.bits = static_cast<std::uint64_t>(n.var);
        int slot;
        if (auto it = by_key.find(key); it != by_key.end()) {
            slot = it->second;
        } else {
            slot = static_cast<int>(tape_.size());
            tape_.push_back(Instr{n.kind, key.func, n.kind == Kind::Variable ? n.var : a, b, n.value});
            by_key.emplace(key, slot);
        }
        by_ptr.emplace(&n, slot);
        return slot;
    };

    outputs_.reserve(roots.size());
    for (const Expr& r : roots) outputs_.push_back(emit(*r.id()));
}

void Program::run(std::span<const double> vars, std::span<double> out) const {
    std::vector<double> slots(tape_.size());
    for (std::size_t i = 0; i < tape_.size(); ++i) {
        const Instr& in = tape_[i];
        switch (in.kind) {
            case Kind::Constant: slots[i] = in.value; break;
            case Kind::Variable:
                if (static_cast<std::size_t>(in.a) >= vars.size())
                    throw Error(Errc::UnknownVariable, "variable index out of range");
                slots[i] = vars[static_cast<std::size_t>(in.a)];
                break;
            case Kind::Negate: slots[i] = -slots[static_cast<std::size_t>(in.a)]; break;
            case Kind::Call: slots[i] = apply_func(in.func, slots[static_cast<std::size_t>(in.a)]); break;
            default:
                slots[i] = apply_binary(in.kind, slots[static_cast<std::size_t>(in.a)],
                                        slots[static_cast<std::size_t>(in.b)]);
                break;
        }
    }
    for (std::size_t k = 0; k < outputs_.size() && k < out.size(); ++k)
        out[k] = slots[static_cast<std::size_t>(outputs_[k])];
}

std::vector<double> Program::run(std::span<const double> vars) const {
    std::vector<double> out(outputs_.size());
    run(vars, out);
    return out;
}

}  // namespace rcsurf::expr
