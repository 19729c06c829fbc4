#include "jetfield/expr.hpp"

#include "jetfield/error.hpp"
#include "poly.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

namespace jetfield {

using detail::Poly;
using detail::PolyPtr;

PolyPtr to_poly(const Expr& e);
Expr from_poly(PolyPtr p);

struct Expr::Node {
    ExprKind kind = ExprKind::Constant;
    Rational value;
    const std::string* name = nullptr;
    Func func = Func::Sin;
    int exponent = 0;
    std::vector<Expr> children;
    PolyPtr canonical;  // set when the node is a canonical form
};

std::string_view to_string(Func f)
{
    switch (f) {
        case Func::Sin: return "sin";
        case Func::Cos: return "cos";
        case Func::Exp: return "exp";
        case Func::Log: return "log";
        case Func::Sqrt: return "sqrt";
    }
    return "?";
}

std::string_view to_string(Verdict v)
{
    switch (v) {
        case Verdict::Proved: return "proved";
        case Verdict::Probable: return "probable";
        case Verdict::Failed: return "failed";
    }
    return "?";
}

namespace {

std::shared_ptr<const Expr::Node> make_constant_node(const Rational& r)
{
    auto n = std::make_shared<Expr::Node>();
    n->kind = ExprKind::Constant;
    n->value = r;
    return n;
}

const std::shared_ptr<const Expr::Node>& zero_node()
{
    static const auto z = make_constant_node(Rational(0));
    return z;
}

bool valid_identifier(std::string_view s)
{
    if (s.empty()) return false;
    auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
    if (!alpha(s[0])) return false;
    for (char c : s)
        if (!alpha(c) && !(c >= '0' && c <= '9')) return false;
    return true;
}

}  // namespace

Expr::Expr() : node_(zero_node()) {}

Expr::Expr(const Rational& value) : node_(value.is_zero() ? zero_node() : make_constant_node(value)) {}

Expr Expr::symbol(std::string_view name)
{
    if (!valid_identifier(name))
        throw Error(ErrorKind::UnknownSymbol, "invalid symbol name '" + std::string(name) + "'");
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::Symbol;
    n->name = detail::intern(name);
    return Expr(std::move(n));
}

Expr Expr::sum(std::vector<Expr> terms)
{
    std::vector<Expr> flat;
    Rational constant;
    for (auto& t : terms) {
        if (t.kind() == ExprKind::Sum) {
            for (const auto& c : t.children()) {
                if (c.is_constant())
                    constant += c.value();
                else
                    flat.push_back(c);
            }
        } else if (t.is_constant()) {
            constant += t.value();
        } else {
            flat.push_back(std::move(t));
        }
    }
    if (!constant.is_zero()) flat.emplace_back(constant);
    if (flat.empty()) return Expr();
    if (flat.size() == 1) return flat.front();
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::Sum;
    n->children = std::move(flat);
    return Expr(std::move(n));
}

Expr Expr::product(std::vector<Expr> factors)
{
    std::vector<Expr> flat;
    Rational constant(1);
    for (auto& f : factors) {
        if (f.kind() == ExprKind::Product) {
            for (const auto& c : f.children()) {
                if (c.is_constant())
                    constant *= c.value();
                else
                    flat.push_back(c);
            }
        } else if (f.is_constant()) {
            constant *= f.value();
        } else {
            flat.push_back(std::move(f));
        }
    }
    if (constant.is_zero()) return Expr();
    if (flat.empty()) return Expr(constant);
    if (constant != Rational(1)) flat.insert(flat.begin(), Expr(constant));
    if (flat.size() == 1) return flat.front();
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::Product;
    n->children = std::move(flat);
    return Expr(std::move(n));
}

Expr Expr::power(Expr base, int exponent)
{
    if (exponent == 0) return Expr(1);
    if (exponent == 1) return base;
    if (base.is_constant() && !(base.value().is_zero() && exponent < 0)) return Expr(pow(base.value(), exponent));
    if (base.kind() == ExprKind::Power) return power(base.children().front(), base.exponent() * exponent);
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::Power;
    n->exponent = exponent;
    n->children.push_back(std::move(base));
    return Expr(std::move(n));
}

Expr Expr::apply(Func f, Expr argument)
{
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::Function;
    n->func = f;
    n->children.push_back(std::move(argument));
    return Expr(std::move(n));
}

ExprKind Expr::kind() const { return node_->kind; }
const Rational& Expr::value() const { return node_->value; }
const std::string& Expr::name() const
{
    static const std::string empty;
    return node_->name ? *node_->name : empty;
}
Func Expr::func() const { return node_->func; }
int Expr::exponent() const { return node_->exponent; }
const std::vector<Expr>& Expr::children() const { return node_->children; }

bool Expr::is_zero() const
{
    return node_->kind == ExprKind::Constant && node_->value.is_zero();
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::sum({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::sum({a, -b}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::product({a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::product({a, Expr::power(b, -1)}); }
Expr operator-(const Expr& a) { return Expr::product({Expr(-1), a}); }

bool operator==(const Expr& a, const Expr& b)
{
    if (a.node_ == b.node_) return true;
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    if (x.kind != y.kind) return false;
    switch (x.kind) {
        case ExprKind::Constant: return x.value == y.value;
        case ExprKind::Symbol: return x.name == y.name;
        case ExprKind::Function:
            if (x.func != y.func) return false;
            break;
        case ExprKind::Power:
            if (x.exponent != y.exponent) return false;
            break;
        default: break;
    }
    return x.children == y.children;
}

bool operator<(const Expr& a, const Expr& b)
{
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    if (x.kind != y.kind) return x.kind < y.kind;
    switch (x.kind) {
        case ExprKind::Constant: return x.value < y.value;
        case ExprKind::Symbol: return x.name != y.name && detail::natural_compare(*x.name, *y.name) < 0;
        case ExprKind::Function:
            if (x.func != y.func) return x.func < y.func;
            break;
        case ExprKind::Power:
            if (x.exponent != y.exponent) return x.exponent < y.exponent;
            break;
        default: break;
    }
    return std::lexicographical_compare(x.children.begin(), x.children.end(), y.children.begin(), y.children.end());
}

Expr pow(const Expr& base, int exponent) { return Expr::power(base, exponent); }
Expr sin(const Expr& e) { return Expr::apply(Func::Sin, e); }
Expr cos(const Expr& e) { return Expr::apply(Func::Cos, e); }
Expr exp(const Expr& e) { return Expr::apply(Func::Exp, e); }
Expr log(const Expr& e) { return Expr::apply(Func::Log, e); }
Expr sqrt(const Expr& e) { return Expr::apply(Func::Sqrt, e); }

// ---------------------------------------------------------------------------
// Canonical form

PolyPtr to_poly(const Expr& e)
{
    const auto& n = *e.node_;
    if (n.canonical) return n.canonical;
    switch (n.kind) {
        case ExprKind::Constant: return std::make_shared<const Poly>(detail::constant(n.value));
        case ExprKind::Symbol: return std::make_shared<const Poly>(detail::symbol(n.name));
        case ExprKind::Sum: {
            Poly acc;
            for (const auto& c : n.children) acc = detail::add(acc, *to_poly(c));
            return std::make_shared<const Poly>(std::move(acc));
        }
        case ExprKind::Product: {
            Poly acc = detail::constant(Rational(1));
            for (const auto& c : n.children) acc = detail::mul(acc, *to_poly(c));
            return std::make_shared<const Poly>(std::move(acc));
        }
        case ExprKind::Power:
            return std::make_shared<const Poly>(detail::power(*to_poly(n.children.front()), n.exponent));
        case ExprKind::Function:
            return std::make_shared<const Poly>(detail::apply(n.func, *to_poly(n.children.front())));
    }
    return std::make_shared<const Poly>();
}

namespace {

Expr atom_expr(const detail::Atom& a)
{
    switch (a.kind) {
        case detail::Atom::Kind::Symbol: return Expr::symbol(*a.symbol);
        case detail::Atom::Kind::Function: return Expr::apply(a.func, from_poly(a.arg));
        case detail::Atom::Kind::Inverse: return Expr::power(from_poly(a.arg), -1);
    }
    return Expr();
}

}  // namespace

Expr from_poly(PolyPtr p)
{
    std::vector<Expr> terms;
    for (const auto& [m, c] : p->terms) {
        std::vector<Expr> factors;
        if (c != Rational(1) || m.empty()) factors.emplace_back(c);
        for (const auto& f : m) factors.push_back(Expr::power(atom_expr(f.atom), f.exponent));
        terms.push_back(Expr::product(std::move(factors)));
    }
    Expr out = Expr::sum(std::move(terms));
    // Attach the canonical polynomial to a fresh copy of the root node so that
    // shared subtrees stay untouched.
    auto node = std::make_shared<Expr::Node>(*out.node_);
    node->canonical = std::move(p);
    return Expr(std::move(node));
}

Expr normalize(const Expr& e)
{
    if (e.node_->canonical) return e;
    return from_poly(to_poly(e));
}

Expr diff(const Expr& e, std::string_view symbol)
{
    return from_poly(std::make_shared<const Poly>(detail::diff(*to_poly(e), detail::intern(symbol))));
}

Expr substitute(const Expr& e, const std::map<std::string, Expr>& replacements)
{
    std::map<const std::string*, PolyPtr> table;
    for (const auto& [name, value] : replacements) table.emplace(detail::intern(name), to_poly(value));
    return from_poly(std::make_shared<const Poly>(detail::substitute(*to_poly(e), table)));
}

std::vector<std::string> free_symbols(const Expr& e)
{
    std::set<const std::string*> syms;
    detail::collect_symbols(*to_poly(e), syms);
    std::vector<std::string> out;
    out.reserve(syms.size());
    for (const auto* s : syms) out.push_back(*s);
    std::sort(out.begin(), out.end(), symbol_less);
    return out;
}

bool is_polynomial(const Expr& e)
{
    const auto p = to_poly(e);
    if (detail::has_functions(*p) || detail::has_inverses(*p)) return false;
    for (const auto& [m, c] : p->terms)
        for (const auto& f : m)
            if (f.exponent < 0) return false;
    return true;
}

bool has_functions(const Expr& e)
{
    return detail::has_functions(*to_poly(e));
}

bool symbol_less(std::string_view a, std::string_view b)
{
    return detail::natural_compare(a, b) < 0;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

void print(std::ostream& os, const Expr& e);

bool is_atomic(const Expr& e)
{
    switch (e.kind()) {
        case ExprKind::Symbol:
        case ExprKind::Function: return true;
        case ExprKind::Constant: return e.value().is_integer() && e.value().sign() >= 0;
        default: return false;
    }
}

void print_power_base(std::ostream& os, const Expr& base, int exponent)
{
    if (is_atomic(base)) {
        print(os, base);
    } else {
        os << '(';
        print(os, base);
        os << ')';
    }
    if (exponent != 1) os << '^' << exponent;
}

void print_factor(std::ostream& os, const Expr& f)
{
    if (f.kind() == ExprKind::Sum || (f.is_constant() && !is_atomic(f))) {
        os << '(';
        print(os, f);
        os << ')';
    } else {
        print(os, f);
    }
}

// Prints |term| and reports its sign. With `leading`, a power in first
// position is parenthesized so that a preceding unary minus binds outside it.
std::string print_magnitude(const Expr& term, bool& negative, bool leading)
{
    Rational coefficient(1);
    std::vector<Expr> numerator;
    std::vector<std::pair<Expr, int>> denominator;
    auto visit = [&](const Expr& f) {
        if (f.is_constant())
            coefficient *= f.value();
        else if (f.kind() == ExprKind::Power && f.exponent() < 0)
            denominator.emplace_back(f.children().front(), -f.exponent());
        else
            numerator.push_back(f);
    };
    if (term.kind() == ExprKind::Product)
        for (const auto& f : term.children()) visit(f);
    else
        visit(term);

    negative = coefficient.sign() < 0;
    const Rational magnitude = abs(coefficient);
    const Rational num = magnitude.numerator();
    const Rational den = magnitude.denominator();

    std::ostringstream os;
    bool first = true;
    if (num != Rational(1) || numerator.empty()) {
        os << num;
        first = false;
    }
    for (const auto& f : numerator) {
        if (!first) os << '*';
        const bool wrap = first && leading && negative && f.kind() == ExprKind::Power;
        if (wrap) os << '(';
        print_factor(os, f);
        if (wrap) os << ')';
        first = false;
    }
    if (den != Rational(1)) os << '/' << den;
    for (const auto& [base, k] : denominator) {
        os << '/';
        print_power_base(os, base, k);
    }
    return os.str();
}

void print(std::ostream& os, const Expr& e)
{
    switch (e.kind()) {
        case ExprKind::Constant: os << e.value(); return;
        case ExprKind::Symbol: os << e.name(); return;
        case ExprKind::Function:
            os << to_string(e.func()) << '(';
            print(os, e.children().front());
            os << ')';
            return;
        case ExprKind::Power:
            if (e.exponent() < 0) {
                os << "1/";
                print_power_base(os, e.children().front(), -e.exponent());
            } else {
                print_power_base(os, e.children().front(), e.exponent());
            }
            return;
        case ExprKind::Product: {
            bool negative = false;
            std::string mag = print_magnitude(e, negative, true);
            if (negative) os << '-';
            os << mag;
            return;
        }
        case ExprKind::Sum: {
            bool first = true;
            for (const auto& t : e.children()) {
                bool negative = false;
                std::string mag = print_magnitude(t, negative, first);
                if (first)
                    os << (negative ? "-" : "") << mag;
                else
                    os << (negative ? " - " : " + ") << mag;
                first = false;
            }
            return;
        }
    }
}

}  // namespace

std::string to_string(const Expr& e)
{
    std::ostringstream os;
    print(os, e);
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Expr& e)
{
    print(os, e);
    return os;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

Value make_exact(Rational r) { return Value{true, std::move(r), 0.0}; }
Value make_real(double d) { return Value{false, Rational(0), d}; }

Value add_values(const Value& a, const Value& b)
{
    if (a.exact && b.exact) return make_exact(a.rational + b.rational);
    return make_real(a.to_double() + b.to_double());
}

Value mul_values(const Value& a, const Value& b)
{
    if (a.exact && b.exact) return make_exact(a.rational * b.rational);
    return make_real(a.to_double() * b.to_double());
}

Value eval_tree(const Expr& e, const Assignment& assignment)
{
    switch (e.kind()) {
        case ExprKind::Constant: return make_exact(e.value());
        case ExprKind::Symbol: {
            auto it = assignment.find(e.name());
            if (it == assignment.end())
                throw Error(ErrorKind::MissingAssignment, "no value for symbol '" + e.name() + "'");
            return make_exact(it->second);
        }
        case ExprKind::Sum: {
            Value acc = make_exact(Rational(0));
            for (const auto& c : e.children()) acc = add_values(acc, eval_tree(c, assignment));
            return acc;
        }
        case ExprKind::Product: {
            Value acc = make_exact(Rational(1));
            for (const auto& c : e.children()) acc = mul_values(acc, eval_tree(c, assignment));
            return acc;
        }
        case ExprKind::Power: {
            Value base = eval_tree(e.children().front(), assignment);
            const int k = e.exponent();
            if (k < 0 && (base.exact ? base.rational.is_zero() : base.real == 0.0))
                throw Error(ErrorKind::DivisionByZero, "negative power of zero");
            if (base.exact) return make_exact(pow(base.rational, k));
            return make_real(std::pow(base.real, k));
        }
        case ExprKind::Function: {
            const double x = eval_tree(e.children().front(), assignment).to_double();
            switch (e.func()) {
                case Func::Sin: return make_real(std::sin(x));
                case Func::Cos: return make_real(std::cos(x));
                case Func::Exp: return make_real(std::exp(x));
                case Func::Log:
                    if (!(x > 0.0)) throw Error(ErrorKind::EvalDomain, "log of a non-positive value");
                    return make_real(std::log(x));
                case Func::Sqrt:
                    if (x < 0.0) throw Error(ErrorKind::EvalDomain, "sqrt of a negative value");
                    return make_real(std::sqrt(x));
            }
        }
    }
    return make_exact(Rational(0));
}

}  // namespace

Value eval_at(const Expr& e, const Assignment& assignment)
{
    return eval_tree(e, assignment);
}

// ---------------------------------------------------------------------------
// Equality

Verdict equivalent(const Expr& e1, const Expr& e2, int trials, std::uint64_t seed)
{
    const auto difference = to_poly(e1 - e2);
    if (difference->is_zero()) return Verdict::Proved;
    // Laurent polynomials are canonical; only opaque atoms can hide a zero.
    if (!detail::has_functions(*difference) && !detail::has_inverses(*difference)) return Verdict::Failed;
    std::set<const std::string*> syms;
    detail::collect_symbols(*difference, syms);
    const bool exact = !detail::has_functions(*difference);

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long long> numerator(-1000, 1000);
    int agreed = 0;
    for (int attempt = 0; agreed < trials && attempt < 8 * trials; ++attempt) {
        std::map<const std::string*, Rational> point;
        for (const auto* s : syms) point.emplace(s, Rational(numerator(rng), 100));
        try {
            if (exact) {
                const Rational v = detail::eval_exact(*difference, [&](const std::string* s) { return point.at(s); });
                if (!v.is_zero()) return Verdict::Failed;
            } else {
                auto lookup = [&](const std::string* s) { return point.at(s).to_double(); };
                const double v = detail::eval_double(*difference, lookup);
                // Scale by the sum of term magnitudes so cancellation of large
                // terms is judged relative to their size.
                double scale = 1.0;
                for (const auto& [m, c] : difference->terms) {
                    detail::Poly single;
                    single.terms.emplace(m, c);
                    scale += std::abs(detail::eval_double(single, lookup));
                }
                if (!(std::abs(v) <= 1e-9 * scale)) return Verdict::Failed;
            }
            ++agreed;
        } catch (const Error&) {
            // outside the domain of some atom; draw another point
        }
    }
    return agreed == trials ? Verdict::Probable : Verdict::Failed;
}

// ---------------------------------------------------------------------------

CompiledExpr::CompiledExpr(const Expr& e, std::span<const std::string> slots) : poly_(to_poly(e))
{
    for (std::size_t i = 0; i < slots.size(); ++i) slot_of_.emplace(detail::intern(slots[i]), static_cast<int>(i));
    std::set<const std::string*> syms;
    detail::collect_symbols(*poly_, syms);
    for (const auto* s : syms)
        if (!slot_of_.count(s)) throw Error(ErrorKind::MissingAssignment, "no value for symbol '" + *s + "'");
}

double CompiledExpr::operator()(std::span<const double> values) const
{
    return detail::eval_double(*poly_, [&](const std::string* s) { return values[slot_of_.at(s)]; });
}

}  // namespace jetfield
