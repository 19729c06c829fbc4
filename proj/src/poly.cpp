#include "poly.hpp"

#include "jetfield/error.hpp"

#include <cmath>
#include <mutex>
#include <unordered_set>

namespace jetfield::detail {

const std::string* intern(std::string_view name)
{
    static std::mutex mutex;
    static std::unordered_set<std::string> table;
    std::lock_guard lock(mutex);
    return &*table.emplace(name).first;
}

int natural_compare(std::string_view a, std::string_view b)
{
    auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        if (is_digit(a[i]) && is_digit(b[j])) {
            std::size_t ie = i;
            std::size_t je = j;
            while (ie < a.size() && is_digit(a[ie])) ++ie;
            while (je < b.size() && is_digit(b[je])) ++je;
            std::size_t is = i;
            std::size_t js = j;
            while (is + 1 < ie && a[is] == '0') ++is;
            while (js + 1 < je && b[js] == '0') ++js;
            if (ie - is != je - js) return ie - is < je - js ? -1 : 1;
            if (int c = a.substr(is, ie - is).compare(b.substr(js, je - js)); c != 0) return c < 0 ? -1 : 1;
            i = ie;
            j = je;
            continue;
        }
        if (a[i] != b[j]) return a[i] < b[j] ? -1 : 1;
        ++i;
        ++j;
    }
    if (i < a.size()) return 1;
    if (j < b.size()) return -1;
    int c = a.compare(b);  // tie-break zero padding
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

int compare(const Atom& a, const Atom& b)
{
    if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
    switch (a.kind) {
        case Atom::Kind::Symbol:
            if (a.symbol == b.symbol) return 0;
            return natural_compare(*a.symbol, *b.symbol);
        case Atom::Kind::Function:
            if (a.func != b.func) return a.func < b.func ? -1 : 1;
            return compare(*a.arg, *b.arg);
        case Atom::Kind::Inverse:
            return compare(*a.arg, *b.arg);
    }
    return 0;
}

int degree(const Monomial& m)
{
    int d = 0;
    for (const auto& f : m) d += f.exponent;
    return d;
}

bool MonomialLess::operator()(const Monomial& a, const Monomial& b) const
{
    const int da = degree(a);
    const int db = degree(b);
    if (da != db) return da > db;
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (int c = compare(a[i].atom, b[i].atom); c != 0) return c < 0;
        if (a[i].exponent != b[i].exponent) return a[i].exponent > b[i].exponent;
    }
    return a.size() > b.size();
}

bool Poly::is_constant() const
{
    return terms.empty() || (terms.size() == 1 && terms.begin()->first.empty());
}

Rational Poly::constant_value() const
{
    return terms.empty() ? Rational(0) : terms.begin()->second;
}

int compare(const Poly& a, const Poly& b)
{
    if (a.terms.size() != b.terms.size()) return a.terms.size() < b.terms.size() ? -1 : 1;
    MonomialLess less;
    for (auto ia = a.terms.begin(), ib = b.terms.begin(); ia != a.terms.end(); ++ia, ++ib) {
        if (less(ia->first, ib->first)) return -1;
        if (less(ib->first, ia->first)) return 1;
        if (ia->second != ib->second) return ia->second < ib->second ? -1 : 1;
    }
    return 0;
}

namespace {

void add_term(TermMap& terms, const Monomial& m, const Rational& c)
{
    if (c.is_zero()) return;
    auto [it, inserted] = terms.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms.erase(it);
    }
}

Poly single_term(Monomial m, Rational c)
{
    Poly p;
    if (!c.is_zero()) p.terms.emplace(std::move(m), std::move(c));
    return p;
}

Monomial merge(const Monomial& a, const Monomial& b)
{
    Monomial out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size()) {
            out.push_back(a[i++]);
        } else if (i == a.size()) {
            out.push_back(b[j++]);
        } else {
            int c = compare(a[i].atom, b[j].atom);
            if (c < 0) {
                out.push_back(a[i++]);
            } else if (c > 0) {
                out.push_back(b[j++]);
            } else {
                int e = a[i].exponent + b[j].exponent;
                if (e != 0) out.push_back({a[i].atom, e});
                ++i;
                ++j;
            }
        }
    }
    return out;
}

bool needs_canonicalization(const Monomial& m)
{
    for (const auto& f : m) {
        if (f.atom.kind == Atom::Kind::Inverse && f.exponent < 0) return true;
        if (f.atom.kind == Atom::Kind::Function && f.atom.func == Func::Sqrt && std::abs(f.exponent) >= 2) return true;
    }
    return false;
}

// Rewrites Inverse atoms with negative exponents as positive powers of their
// argument, and sqrt(a)^(2q + r) as a^q * sqrt(a)^r.
Poly canonical_term(Monomial m, const Rational& c)
{
    if (!needs_canonicalization(m)) return single_term(std::move(m), c);
    Monomial kept;
    Poly multiplier = constant(c);
    for (auto& f : m) {
        if (f.atom.kind == Atom::Kind::Inverse && f.exponent < 0) {
            multiplier = mul(multiplier, power(*f.atom.arg, -f.exponent));
        } else if (f.atom.kind == Atom::Kind::Function && f.atom.func == Func::Sqrt && std::abs(f.exponent) >= 2) {
            const int q = f.exponent / 2;
            const int r = f.exponent - 2 * q;
            multiplier = mul(multiplier, power(*f.atom.arg, q));
            if (r != 0) kept.push_back({f.atom, r});
        } else {
            kept.push_back(std::move(f));
        }
    }
    return mul(single_term(std::move(kept), Rational(1)), multiplier);
}

Poly atom_poly(const Atom& a, int exponent = 1)
{
    return single_term(Monomial{Factor{a, exponent}}, Rational(1));
}

Poly inverse_of(const Poly& p)
{
    if (p.is_zero()) throw Error(ErrorKind::DivisionByZero, "division by the zero polynomial");
    if (p.terms.size() == 1) {
        const auto& [m, c] = *p.terms.begin();
        Monomial inv = m;
        for (auto& f : inv) f.exponent = -f.exponent;
        return canonical_term(std::move(inv), Rational(1) / c);
    }
    const Rational lead = p.terms.begin()->second;
    Atom a;
    a.kind = Atom::Kind::Inverse;
    a.arg = std::make_shared<const Poly>(scale(p, Rational(1) / lead));
    return scale(atom_poly(a), Rational(1) / lead);
}

}  // namespace

Poly constant(const Rational& c)
{
    return single_term({}, c);
}

Poly symbol(const std::string* name)
{
    Atom a;
    a.kind = Atom::Kind::Symbol;
    a.symbol = name;
    return atom_poly(a);
}

Poly add(const Poly& a, const Poly& b)
{
    if (a.terms.size() < b.terms.size()) return add(b, a);
    Poly out = a;
    for (const auto& [m, c] : b.terms) add_term(out.terms, m, c);
    return out;
}

Poly scale(const Poly& p, const Rational& c)
{
    if (c.is_zero()) return {};
    Poly out = p;
    for (auto& [m, coeff] : out.terms) coeff *= c;
    return out;
}

Poly mul(const Poly& a, const Poly& b)
{
    if (a.is_zero() || b.is_zero()) return {};
    Poly out;
    for (const auto& [ma, ca] : a.terms) {
        for (const auto& [mb, cb] : b.terms) {
            Monomial m = merge(ma, mb);
            Rational c = ca * cb;
            if (needs_canonicalization(m)) {
                Poly t = canonical_term(std::move(m), c);
                for (const auto& [mt, ct] : t.terms) add_term(out.terms, mt, ct);
            } else {
                add_term(out.terms, m, c);
            }
        }
    }
    return out;
}

Poly power(const Poly& p, int exponent)
{
    if (exponent == 0) return constant(Rational(1));
    if (exponent < 0) return power(inverse_of(p), -exponent);
    if (p.terms.size() == 1) {
        const auto& [m, c] = *p.terms.begin();
        Monomial out = m;
        for (auto& f : out) f.exponent *= exponent;
        return canonical_term(std::move(out), pow(c, exponent));
    }
    Poly result = constant(Rational(1));
    Poly base = p;
    for (unsigned e = static_cast<unsigned>(exponent); e != 0; e >>= 1) {
        if (e & 1u) result = mul(result, base);
        if (e > 1) base = mul(base, base);
    }
    return result;
}

Poly apply(Func f, const Poly& arg)
{
    if (arg.is_constant()) {
        const Rational v = arg.constant_value();
        switch (f) {
            case Func::Sin:
            case Func::Sqrt:
                if (v.is_zero()) return {};
                if (f == Func::Sqrt && v == Rational(1)) return constant(Rational(1));
                break;
            case Func::Cos:
            case Func::Exp:
                if (v.is_zero()) return constant(Rational(1));
                break;
            case Func::Log:
                if (v == Rational(1)) return {};
                break;
        }
    }
    Atom a;
    a.kind = Atom::Kind::Function;
    a.func = f;
    a.arg = std::make_shared<const Poly>(arg);
    return atom_poly(a);
}

namespace {

Poly diff_atom(const Atom& a, const std::string* s)
{
    switch (a.kind) {
        case Atom::Kind::Symbol:
            return a.symbol == s ? constant(Rational(1)) : Poly{};
        case Atom::Kind::Function: {
            Poly darg = diff(*a.arg, s);
            if (darg.is_zero()) return {};
            Poly outer;
            switch (a.func) {
                case Func::Sin: outer = apply(Func::Cos, *a.arg); break;
                case Func::Cos: outer = scale(apply(Func::Sin, *a.arg), Rational(-1)); break;
                case Func::Exp: outer = apply(Func::Exp, *a.arg); break;
                case Func::Log: outer = power(*a.arg, -1); break;
                case Func::Sqrt: outer = scale(power(apply(Func::Sqrt, *a.arg), -1), Rational(1, 2)); break;
            }
            return mul(outer, darg);
        }
        case Atom::Kind::Inverse: {
            Poly darg = diff(*a.arg, s);
            if (darg.is_zero()) return {};
            return mul(scale(atom_poly(a, 2), Rational(-1)), darg);
        }
    }
    return {};
}

bool mentions(const Atom& a, const std::string* s)
{
    if (a.kind == Atom::Kind::Symbol) return a.symbol == s;
    std::set<const std::string*> syms;
    collect_symbols(*a.arg, syms);
    return syms.count(s) != 0;
}

}  // namespace

Poly diff(const Poly& p, const std::string* s)
{
    Poly out;
    for (const auto& [m, c] : p.terms) {
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (!mentions(m[i].atom, s)) continue;
            Poly da = diff_atom(m[i].atom, s);
            if (da.is_zero()) continue;
            Monomial rest = m;
            rest[i].exponent -= 1;
            if (rest[i].exponent == 0) rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
            Poly term = mul(canonical_term(std::move(rest), c * Rational(m[i].exponent)), da);
            out = add(out, term);
        }
    }
    return out;
}

Poly substitute(const Poly& p, const std::map<const std::string*, PolyPtr>& replacements)
{
    Poly out;
    for (const auto& [m, c] : p.terms) {
        Poly term = constant(c);
        Monomial untouched;
        for (const auto& f : m) {
            switch (f.atom.kind) {
                case Atom::Kind::Symbol:
                    if (auto it = replacements.find(f.atom.symbol); it != replacements.end())
                        term = mul(term, power(*it->second, f.exponent));
                    else
                        untouched.push_back(f);
                    break;
                case Atom::Kind::Function:
                    term = mul(term, power(apply(f.atom.func, substitute(*f.atom.arg, replacements)), f.exponent));
                    break;
                case Atom::Kind::Inverse:
                    term = mul(term, power(substitute(*f.atom.arg, replacements), -f.exponent));
                    break;
            }
        }
        out = add(out, mul(term, single_term(std::move(untouched), Rational(1))));
    }
    return out;
}

bool has_functions(const Poly& p)
{
    for (const auto& [m, c] : p.terms)
        for (const auto& f : m) {
            if (f.atom.kind == Atom::Kind::Function) return true;
            if (f.atom.kind == Atom::Kind::Inverse && has_functions(*f.atom.arg)) return true;
        }
    return false;
}

bool has_inverses(const Poly& p)
{
    for (const auto& [m, c] : p.terms)
        for (const auto& f : m) {
            if (f.atom.kind == Atom::Kind::Inverse) return true;
            if (f.atom.kind == Atom::Kind::Function && has_inverses(*f.atom.arg)) return true;
        }
    return false;
}

void collect_symbols(const Poly& p, std::set<const std::string*>& out)
{
    for (const auto& [m, c] : p.terms)
        for (const auto& f : m) {
            if (f.atom.kind == Atom::Kind::Symbol)
                out.insert(f.atom.symbol);
            else
                collect_symbols(*f.atom.arg, out);
        }
}

namespace {

double apply_double(Func f, double x)
{
    switch (f) {
        case Func::Sin: return std::sin(x);
        case Func::Cos: return std::cos(x);
        case Func::Exp: return std::exp(x);
        case Func::Log:
            if (!(x > 0.0)) throw Error(ErrorKind::EvalDomain, "log of a non-positive value");
            return std::log(x);
        case Func::Sqrt:
            if (x < 0.0) throw Error(ErrorKind::EvalDomain, "sqrt of a negative value");
            return std::sqrt(x);
    }
    return 0.0;
}

double ipow(double x, int e)
{
    if (e < 0) {
        if (x == 0.0) throw Error(ErrorKind::DivisionByZero, "negative power of zero");
        return 1.0 / ipow(x, -e);
    }
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

}  // namespace

double eval_double(const Poly& p, const Lookup& lookup)
{
    double total = 0.0;
    for (const auto& [m, c] : p.terms) {
        double t = c.to_double();
        for (const auto& f : m) {
            double base = 0.0;
            switch (f.atom.kind) {
                case Atom::Kind::Symbol: base = lookup(f.atom.symbol); break;
                case Atom::Kind::Function: base = apply_double(f.atom.func, eval_double(*f.atom.arg, lookup)); break;
                case Atom::Kind::Inverse: {
                    double d = eval_double(*f.atom.arg, lookup);
                    if (d == 0.0) throw Error(ErrorKind::DivisionByZero, "division by zero");
                    base = 1.0 / d;
                    break;
                }
            }
            t *= ipow(base, f.exponent);
        }
        total += t;
    }
    return total;
}

Rational eval_exact(const Poly& p, const ExactLookup& lookup)
{
    Rational total;
    for (const auto& [m, c] : p.terms) {
        Rational t = c;
        for (const auto& f : m) {
            Rational base;
            if (f.atom.kind == Atom::Kind::Symbol)
                base = lookup(f.atom.symbol);
            else if (f.atom.kind == Atom::Kind::Inverse)
                base = Rational(1) / eval_exact(*f.atom.arg, lookup);
            else
                throw Error(ErrorKind::EvalDomain, "exact evaluation of a transcendental atom");
            if (f.exponent < 0 && base.is_zero()) throw Error(ErrorKind::DivisionByZero, "negative power of zero");
            t *= pow(base, f.exponent);
        }
        total += t;
    }
    return total;
}

}  // namespace jetfield::detail
