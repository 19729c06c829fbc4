#pragma once

#include "jetfield/expr.hpp"

#include <set>
#include <string>
#include <string_view>

namespace jetfield {

/// Names an expression may reference. An empty scope with `open` set accepts
/// any identifier.
struct SymbolScope {
    std::set<std::string> symbols;
    bool open = false;

    [[nodiscard]] bool contains(const std::string& name) const { return open || symbols.count(name) != 0; }
};

/// Parses expression text:
///
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := base ('^' integer)?
///   base   := number | ident | func '(' expr ')' | '(' expr ')' | '-' base
///   func   := sin | cos | exp | log | sqrt
///
/// Numbers are integers or decimal fractions, held as exact rationals. Throws
/// SyntaxError (with line/column), UnknownSymbol or ArityError.
Expr parse_expr(std::string_view text, const SymbolScope& scope = SymbolScope{{}, true});

}  // namespace jetfield
