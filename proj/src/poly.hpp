#pragma once

// Canonical polynomial representation behind Expr::normalize. Internal.

#include "jetfield/expr.hpp"
#include "jetfield/rational.hpp"

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace jetfield::detail {

struct Poly;
using PolyPtr = std::shared_ptr<const Poly>;

/// Interned symbol name; equal names share one pointer for the process
/// lifetime.
const std::string* intern(std::string_view name);

int natural_compare(std::string_view a, std::string_view b);

/// Indivisible factor of a monomial. Inverse atoms stand for 1/P where P is a
/// monic polynomial with at least two terms; they only carry positive
/// exponents.
struct Atom {
    enum class Kind : std::uint8_t { Symbol = 0, Function = 1, Inverse = 2 };
    Kind kind = Kind::Symbol;
    const std::string* symbol = nullptr;
    Func func = Func::Sin;
    PolyPtr arg;
};

int compare(const Atom& a, const Atom& b);

struct Factor {
    Atom atom;
    int exponent = 1;
};

/// Sorted by atom, nonzero exponents.
using Monomial = std::vector<Factor>;

int degree(const Monomial& m);

/// Total order on monomials; also the print order (higher degree first).
struct MonomialLess {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

using TermMap = std::map<Monomial, Rational, MonomialLess>;

struct Poly {
    TermMap terms;  // coefficients are nonzero

    [[nodiscard]] bool is_zero() const { return terms.empty(); }
    [[nodiscard]] bool is_constant() const;
    [[nodiscard]] Rational constant_value() const;  // precondition: is_constant()
};

int compare(const Poly& a, const Poly& b);

Poly constant(const Rational& c);
Poly symbol(const std::string* name);
Poly add(const Poly& a, const Poly& b);
Poly scale(const Poly& p, const Rational& c);
Poly mul(const Poly& a, const Poly& b);
Poly power(const Poly& p, int exponent);
Poly apply(Func f, const Poly& arg);
Poly diff(const Poly& p, const std::string* symbol);
Poly substitute(const Poly& p, const std::map<const std::string*, PolyPtr>& replacements);

bool has_functions(const Poly& p);
bool has_inverses(const Poly& p);
void collect_symbols(const Poly& p, std::set<const std::string*>& out);

using Lookup = std::function<double(const std::string*)>;
using ExactLookup = std::function<Rational(const std::string*)>;

/// Floating-point evaluation; throws EvalDomain / DivisionByZero.
double eval_double(const Poly& p, const Lookup& lookup);
/// Exact evaluation; precondition: !has_functions(p).
Rational eval_exact(const Poly& p, const ExactLookup& lookup);

}  // namespace jetfield::detail
