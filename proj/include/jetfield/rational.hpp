#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <Eigen/Core>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace jetfield {

/// Exact arbitrary-precision rational number.
///
/// A plain value class over Boost.Multiprecision so that it composes with
/// Eigen containers (the expression-template number type does not).
class Rational {
public:
    using Impl = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

    Rational() = default;
    Rational(long long v) : v_(v) {}  // NOLINT(google-explicit-constructor)
    Rational(long long num, long long den);
    explicit Rational(Impl v) : v_(std::move(v)) {}

    /// Parses "3", "-2", "3/4", "0.125", "-1.5". Decimal fractions are exact.
    static Rational parse(std::string_view text);

    [[nodiscard]] bool is_zero() const { return v_.is_zero(); }
    [[nodiscard]] bool is_integer() const;
    [[nodiscard]] int sign() const { return v_.sign(); }
    [[nodiscard]] double to_double() const { return v_.convert_to<double>(); }
    [[nodiscard]] std::string str() const;
    [[nodiscard]] Rational numerator() const;
    [[nodiscard]] Rational denominator() const;
    [[nodiscard]] const Impl& impl() const { return v_; }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(Impl(-a.v_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b)
    {
        if (a.v_ < b.v_) return std::strong_ordering::less;
        if (b.v_ < a.v_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r);

private:
    Impl v_{0};
};

Rational abs(const Rational& r);
/// Integer power; a negative exponent of zero throws DivisionByZero.
Rational pow(const Rational& r, int exponent);

}  // namespace jetfield

namespace Eigen {

template <>
struct NumTraits<jetfield::Rational> : GenericNumTraits<jetfield::Rational> {
    using Real = jetfield::Rational;
    using NonInteger = jetfield::Rational;
    using Literal = jetfield::Rational;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 10,
        AddCost = 20,
        MulCost = 40
    };
    static inline Real epsilon() { return Real(0); }
    static inline Real dummy_precision() { return Real(0); }
    static inline int digits10() { return 0; }
    static inline int max_digits10() { return 0; }
};

}  // namespace Eigen
