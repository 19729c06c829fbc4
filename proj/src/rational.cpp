#include "jetfield/rational.hpp"

#include "jetfield/error.hpp"

#include <ostream>

namespace jetfield {

namespace {

using BigInt = boost::multiprecision::cpp_int;

// boost reads a leading 0 as an octal prefix, so strip it first
BigInt decimal(std::string_view digits)
{
    while (digits.size() > 1 && digits.front() == '0') digits.remove_prefix(1);
    return BigInt(std::string(digits.empty() ? "0" : digits));
}

bool all_digits(std::string_view s)
{
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

}  // namespace

Rational::Rational(long long num, long long den)
{
    if (den == 0) throw Error(ErrorKind::DivisionByZero, "rational with zero denominator");
    v_ = Impl(num) / Impl(den);
}

Rational Rational::parse(std::string_view text)
{
    auto fail = [&] { return Error(ErrorKind::InvalidModel, "not a rational number: '" + std::string(text) + "'"); };
    std::string_view s = text;
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    Impl value;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        auto num = s.substr(0, slash);
        auto den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) throw fail();
        BigInt d = decimal(den);
        if (d == 0) throw Error(ErrorKind::DivisionByZero, "rational with zero denominator");
        value = Impl(decimal(num)) / Impl(d);
    } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
        auto whole = s.substr(0, dot);
        auto frac = s.substr(dot + 1);
        if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
            (!frac.empty() && !all_digits(frac)))
            throw fail();
        BigInt scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        BigInt num = decimal(std::string(whole) + std::string(frac));
        value = Impl(num) / Impl(scale);
    } else {
        if (!all_digits(s)) throw fail();
        value = Impl(decimal(s));
    }
    return Rational(negative ? Impl(-value) : value);
}

bool Rational::is_integer() const
{
    return boost::multiprecision::denominator(v_) == 1;
}

std::string Rational::str() const
{
    const auto num = boost::multiprecision::numerator(v_);
    const auto den = boost::multiprecision::denominator(v_);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

Rational Rational::numerator() const
{
    return Rational(Impl(boost::multiprecision::numerator(v_)));
}

Rational Rational::denominator() const
{
    return Rational(Impl(boost::multiprecision::denominator(v_)));
}

Rational& Rational::operator/=(const Rational& o)
{
    if (o.is_zero()) throw Error(ErrorKind::DivisionByZero, "division by zero");
    v_ /= o.v_;
    return *this;
}

std::ostream& operator<<(std::ostream& os, const Rational& r)
{
    return os << r.str();
}

Rational abs(const Rational& r)
{
    return r.sign() < 0 ? -r : r;
}

Rational pow(const Rational& r, int exponent)
{
    if (exponent < 0) return Rational(1) / pow(r, -exponent);
    Rational result(1);
    Rational base = r;
    for (unsigned e = static_cast<unsigned>(exponent); e != 0; e >>= 1) {
        if (e & 1u) result *= base;
        if (e > 1) base *= base;
    }
    return result;
}

}  // namespace jetfield
