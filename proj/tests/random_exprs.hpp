#pragma once

#include "jetfield/expr.hpp"

#include <random>
#include <string>
#include <vector>

namespace testing_support {

inline jetfield::Rational small_rational(std::mt19937_64& rng)
{
    std::uniform_int_distribution<long long> num(-9, 9);
    std::uniform_int_distribution<long long> den(1, 5);
    return jetfield::Rational(num(rng), den(rng));
}

/// Random polynomial of total degree <= `degree` in the given symbols.
inline jetfield::Expr random_polynomial(std::mt19937_64& rng, const std::vector<std::string>& symbols, int degree,
                                        int terms = 5)
{
    std::uniform_int_distribution<int> pick(0, static_cast<int>(symbols.size()) - 1);
    std::uniform_int_distribution<int> deg(0, degree);
    jetfield::Expr out = 0;
    for (int t = 0; t < terms; ++t) {
        jetfield::Expr mono = small_rational(rng);
        const int d = deg(rng);
        for (int k = 0; k < d; ++k) mono = mono * jetfield::Expr::symbol(symbols[pick(rng)]);
        out = out + mono;
    }
    return out;
}

}  // namespace testing_support
