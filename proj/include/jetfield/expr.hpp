#pragma once

#include "jetfield/rational.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace jetfield {

namespace detail {
struct Poly;
}

enum class ExprKind : std::uint8_t { Constant, Symbol, Sum, Product, Power, Function };
enum class Func : std::uint8_t { Sin, Cos, Exp, Log, Sqrt };

std::string_view to_string(Func f);

/// Immutable symbolic expression.
///
/// Nodes are shared and never mutated, so copying an Expr is cheap and
/// expressions may be handed across threads freely. Arithmetic operators build
/// trees without simplification; call normalize() for the canonical form.
class Expr {
public:
    Expr();  // the constant 0
    Expr(const Rational& value);  // NOLINT(google-explicit-constructor)
    Expr(long long value) : Expr(Rational(value)) {}  // NOLINT(google-explicit-constructor)
    Expr(int value) : Expr(Rational(value)) {}  // NOLINT(google-explicit-constructor)

    static Expr symbol(std::string_view name);
    static Expr sum(std::vector<Expr> terms);
    static Expr product(std::vector<Expr> factors);
    static Expr power(Expr base, int exponent);
    static Expr apply(Func f, Expr argument);

    [[nodiscard]] ExprKind kind() const;
    [[nodiscard]] const Rational& value() const;      // Constant
    [[nodiscard]] const std::string& name() const;    // Symbol
    [[nodiscard]] Func func() const;                  // Function
    [[nodiscard]] int exponent() const;               // Power
    [[nodiscard]] const std::vector<Expr>& children() const;

    [[nodiscard]] bool is_constant() const { return kind() == ExprKind::Constant; }
    /// True for the literal constant 0 (structural, not semantic).
    [[nodiscard]] bool is_zero() const;

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a);
    Expr& operator+=(const Expr& o) { return *this = *this + o; }
    Expr& operator-=(const Expr& o) { return *this = *this - o; }
    Expr& operator*=(const Expr& o) { return *this = *this * o; }
    Expr& operator/=(const Expr& o) { return *this = *this / o; }

    /// Structural equality. Canonical forms of equal expressions compare equal.
    friend bool operator==(const Expr& a, const Expr& b);
    friend bool operator<(const Expr& a, const Expr& b);

    struct Node;

private:
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;

    friend std::shared_ptr<const detail::Poly> to_poly(const Expr& e);
    friend Expr from_poly(std::shared_ptr<const detail::Poly> p);
    friend Expr normalize(const Expr& e);
};

Expr pow(const Expr& base, int exponent);
Expr sin(const Expr& e);
Expr cos(const Expr& e);
Expr exp(const Expr& e);
Expr log(const Expr& e);
Expr sqrt(const Expr& e);

/// Canonical form: expanded polynomial with rational coefficients over a fixed
/// total order of symbols; function applications are opaque atoms with
/// normalized arguments. Idempotent.
Expr normalize(const Expr& e);

/// Partial derivative treating every other symbol as independent. The result
/// is normalized.
Expr diff(const Expr& e, std::string_view symbol);

/// Replaces symbols by expressions simultaneously. The result is normalized.
Expr substitute(const Expr& e, const std::map<std::string, Expr>& replacements);

/// Symbols occurring in e, in the canonical symbol order.
std::vector<std::string> free_symbols(const Expr& e);

[[nodiscard]] bool is_polynomial(const Expr& e);
[[nodiscard]] bool has_functions(const Expr& e);

/// Canonical symbol order: natural order on names (digit runs compare
/// numerically), so y1_2 < y1_10.
bool symbol_less(std::string_view a, std::string_view b);

/// Plain text under the expression grammar; round-trips through parse_expr.
std::string to_string(const Expr& e);
std::ostream& operator<<(std::ostream& os, const Expr& e);

/// Result of eval_at: exact when the expression is rational, float otherwise.
struct Value {
    bool exact = true;
    Rational rational;
    double real = 0.0;

    [[nodiscard]] double to_double() const { return exact ? rational.to_double() : real; }
    friend bool operator==(const Value& a, const Value& b) = default;
};

using Assignment = std::map<std::string, Rational>;

Value eval_at(const Expr& e, const Assignment& assignment);

enum class Verdict : std::uint8_t { Proved, Probable, Failed };
std::string_view to_string(Verdict v);

/// Decides e1 == e2. Proved when the canonical difference is 0. Otherwise, if
/// either side carries opaque atoms, compares at random rational points in
/// [-10, 10] and reports Probable on agreement.
Verdict equivalent(const Expr& e1, const Expr& e2, int trials = 64, std::uint64_t seed = 0x5eed);

/// Fast floating-point evaluator over a fixed slot layout.
class CompiledExpr {
public:
    CompiledExpr(const Expr& e, std::span<const std::string> slots);
    [[nodiscard]] double operator()(std::span<const double> values) const;

private:
    std::shared_ptr<const detail::Poly> poly_;
    std::unordered_map<const std::string*, int> slot_of_;
};

}  // namespace jetfield

namespace Eigen {

template <>
struct NumTraits<jetfield::Expr> : GenericNumTraits<jetfield::Expr> {
    using Real = jetfield::Expr;
    using NonInteger = jetfield::Expr;
    using Literal = jetfield::Expr;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 1,
        AddCost = 50,
        MulCost = 100
    };
    static inline Real epsilon() { return Real(0); }
    static inline Real dummy_precision() { return Real(0); }
    static inline int digits10() { return 0; }
    static inline int max_digits10() { return 0; }
};

}  // namespace Eigen
