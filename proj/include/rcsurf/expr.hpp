#pragma once

// Closed-form scalar expressions: parsing, evaluation, exact symbolic
// differentiation, printing, and a compiled evaluation tape.
//
// Grammar (whitespace-insensitive):
//
//   expr    = term { ("+" | "-") term } ;
//   term    = unary { ("*" | "/") unary } ;
//   unary   = "-" unary | power ;
//   power   = primary [ "^" unary ] ;            (* right-associative *)
//   primary = number | "pi" | identifier
//           | function "(" expr ")" | "(" expr ")" ;
//   function = "sin" | "cos" | "tan" | "sinh" | "cosh" | "tanh" | "sech"
//            | "exp" | "log" | "sqrt" | "abs" | "sign" ;
//
// Function application always needs parentheses: "tanh v" is rejected.

#include <cstdint>
#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rcsurf::expr {

enum class Func : std::uint8_t { Sin, Cos, Tan, Sinh, Cosh, Tanh, Sech, Exp, Log, Sqrt, Abs, Sign };
enum class Kind : std::uint8_t { Constant, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };

std::string_view func_name(Func f);
std::optional<Func> func_from_name(std::string_view name);

/// Ordered set of variable names; an Expr variable refers to its position.
class VarSet {
public:
    VarSet() = default;
    VarSet(std::initializer_list<std::string> names);
    explicit VarSet(std::vector<std::string> names);

    std::optional<int> index_of(std::string_view name) const;
    std::size_t size() const noexcept { return names_.size(); }
    const std::string& name(int i) const { return names_.at(static_cast<std::size_t>(i)); }
    const std::vector<std::string>& names() const noexcept { return names_; }

private:
    std::vector<std::string> names_;
};

struct Node;

/// Immutable expression handle. Copies share the underlying tree.
class Expr {
public:
    Expr();
    Expr(double value);  // NOLINT(google-explicit-constructor): literals mix freely with Exprs

    static Expr variable(int index, std::string name);

    Kind kind() const;
    Func func() const;
    double value() const;
    int var_index() const;
    const std::string& var_name() const;
    Expr lhs() const;
    Expr rhs() const;

    bool is_constant() const { return kind() == Kind::Constant; }
    bool is_constant(double v) const { return is_constant() && value() == v; }

    const Node* id() const noexcept { return node_.get(); }

private:
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    std::shared_ptr<const Node> node_;

    friend Expr make_unary(Kind, Func, const Expr&);
    friend Expr make_binary(Kind, const Expr&, const Expr&);
};

// Builders fold constants and absorb 0/1 where the result is exact.
Expr operator-(const Expr& a);
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr pow(const Expr& base, const Expr& exponent);
Expr call(Func f, const Expr& arg);

inline Expr sin(const Expr& a) { return call(Func::Sin, a); }
inline Expr cos(const Expr& a) { return call(Func::Cos, a); }
inline Expr tanh(const Expr& a) { return call(Func::Tanh, a); }
inline Expr sech(const Expr& a) { return call(Func::Sech, a); }
inline Expr sqrt(const Expr& a) { return call(Func::Sqrt, a); }

using Bindings = std::map<std::string, double, std::less<>>;

/// Parses `text`. Identifiers resolve first against `vars`, then against
/// `constants` (substituted as literals), then `pi`.
Expr parse(std::string_view text, const VarSet& vars, const Bindings& constants = {});

/// Evaluates with `values[i]` bound to variable index i.
double eval(const Expr& e, std::span<const double> values);
double eval(const Expr& e, const Bindings& bindings);

Expr diff(const Expr& e, int var_index);
Expr diff(const Expr& e, std::string_view var_name);

/// Prints in the parser's grammar; parse(to_string(e)) evaluates bitwise
/// identically to e.
std::string to_string(const Expr& e);

std::set<std::string> free_variables(const Expr& e);

/// Number of distinct nodes reachable from e.
std::size_t node_count(const Expr& e);

/// Linear evaluation tape for a batch of expressions with structurally
/// equal subexpressions merged. Evaluation is pure and thread-safe.
class Program {
public:
    Program() = default;
    explicit Program(std::span<const Expr> roots);

    std::size_t outputs() const noexcept { return outputs_.size(); }
    std::size_t tape_size() const noexcept { return tape_.size(); }

    void run(std::span<const double> vars, std::span<double> out) const;
    std::vector<double> run(std::span<const double> vars) const;

private:
    struct Instr {
        Kind kind;
        Func func;
        int a;
        int b;
        double value;
    };

    std::vector<Instr> tape_;
    std::vector<int> outputs_;
};

}  // namespace rcsurf::expr
