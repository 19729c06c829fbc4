#include "jetfield/parser.hpp"

#include "jetfield/error.hpp"

#include <array>
#include <optional>
#include <vector>

namespace jetfield {

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
    Tok kind;
    std::string text;
    int line;
    int column;
};

bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::vector<Token> tokenize(std::string_view text)
{
    std::vector<Token> out;
    int line = 1;
    int column = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
    };
    while (i < text.size()) {
        const char c = text[i];
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            advance(1);
            continue;
        }
        const int l = line;
        const int col = column;
        if (is_digit(c) || (c == '.' && i + 1 < text.size() && is_digit(text[i + 1]))) {
            std::size_t j = i;
            while (j < text.size() && is_digit(text[j])) ++j;
            if (j < text.size() && text[j] == '.') {
                ++j;
                while (j < text.size() && is_digit(text[j])) ++j;
            }
            out.push_back({Tok::Number, std::string(text.substr(i, j - i)), l, col});
            advance(j - i);
            continue;
        }
        if (is_alpha(c)) {
            std::size_t j = i;
            while (j < text.size() && (is_alpha(text[j]) || is_digit(text[j]))) ++j;
            out.push_back({Tok::Ident, std::string(text.substr(i, j - i)), l, col});
            advance(j - i);
            continue;
        }
        Tok kind;
        switch (c) {
            case '+': kind = Tok::Plus; break;
            case '-': kind = Tok::Minus; break;
            case '*': kind = Tok::Star; break;
            case '/': kind = Tok::Slash; break;
            case '^': kind = Tok::Caret; break;
            case '(': kind = Tok::LParen; break;
            case ')': kind = Tok::RParen; break;
            case ',': kind = Tok::Comma; break;
            default: throw SyntaxError(std::string("unexpected character '") + c + "'", l, col);
        }
        out.push_back({kind, std::string(1, c), l, col});
        advance(1);
    }
    out.push_back({Tok::End, "", line, column});
    return out;
}

std::optional<Func> function_named(std::string_view name)
{
    static constexpr std::array<std::pair<std::string_view, Func>, 5> table{{
        {"sin", Func::Sin},
        {"cos", Func::Cos},
        {"exp", Func::Exp},
        {"log", Func::Log},
        {"sqrt", Func::Sqrt},
    }};
    for (const auto& [n, f] : table)
        if (n == name) return f;
    return std::nullopt;
}

class Parser {
public:
    Parser(std::vector<Token> tokens, const SymbolScope& scope) : tokens_(std::move(tokens)), scope_(scope) {}

    Expr parse()
    {
        Expr e = expr();
        if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
        return e;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& next() { return tokens_[pos_++]; }

    [[noreturn]] void fail(const std::string& message) const
    {
        const auto& t = peek();
        throw SyntaxError(t.kind == Tok::End ? message + " (end of input)" : message, t.line, t.column);
    }

    void close_paren(const Token& open)
    {
        if (peek().kind != Tok::RParen) {
            if (peek().kind == Tok::End) throw SyntaxError("unclosed parenthesis", open.line, open.column);
            fail("expected ')'");
        }
        ++pos_;
    }

    Expr expr()
    {
        std::vector<Expr> terms{term()};
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            const bool minus = next().kind == Tok::Minus;
            Expr t = term();
            terms.push_back(minus ? -t : t);
        }
        return Expr::sum(std::move(terms));
    }

    Expr term()
    {
        Expr acc = factor();
        while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
            const bool divide = next().kind == Tok::Slash;
            Expr f = factor();
            acc = divide ? acc / f : acc * f;
        }
        return acc;
    }

    Expr factor()
    {
        Expr b = base();
        if (peek().kind == Tok::Caret) {
            ++pos_;
            bool negative = false;
            if (peek().kind == Tok::Minus) {
                negative = true;
                ++pos_;
            }
            if (peek().kind != Tok::Number || peek().text.find('.') != std::string::npos)
                fail("expected an integer exponent");
            const std::string digits = next().text;
            if (digits.size() > 6) fail("exponent too large");
            const int k = std::stoi(digits);
            b = Expr::power(b, negative ? -k : k);
        }
        return b;
    }

    Expr base()
    {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::Number:
                ++pos_;
                return Expr(Rational::parse(t.text));
            case Tok::Minus:
                ++pos_;
                return -base();
            case Tok::LParen: {
                const Token open = next();
                Expr e = expr();
                close_paren(open);
                return e;
            }
            case Tok::Ident: {
                const Token id = next();
                if (peek().kind == Tok::LParen) {
                    auto f = function_named(id.text);
                    if (!f)
                        throw Error(ErrorKind::UnknownSymbol,
                                    "unknown function '" + id.text + "' at line " + std::to_string(id.line) +
                                        ", column " + std::to_string(id.column));
                    const Token open = next();
                    std::vector<Expr> args;
                    if (peek().kind != Tok::RParen) {
                        args.push_back(expr());
                        while (peek().kind == Tok::Comma) {
                            ++pos_;
                            args.push_back(expr());
                        }
                    }
                    close_paren(open);
                    if (args.size() != 1)
                        throw Error(ErrorKind::ArityError, id.text + " takes exactly one argument, got " +
                                                               std::to_string(args.size()));
                    return Expr::apply(*f, args.front());
                }
                if (function_named(id.text))
                    throw Error(ErrorKind::ArityError, "function '" + id.text + "' used without an argument");
                if (!scope_.contains(id.text))
                    throw Error(ErrorKind::UnknownSymbol, "unknown symbol '" + id.text + "' at line " +
                                                              std::to_string(id.line) + ", column " +
                                                              std::to_string(id.column));
                return Expr::symbol(id.text);
            }
            default: fail(t.kind == Tok::End ? "expected an operand" : "unexpected '" + t.text + "'");
        }
    }

    std::vector<Token> tokens_;
    const SymbolScope& scope_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text, const SymbolScope& scope)
{
    return Parser(tokenize(text), scope).parse();
}

}  // namespace jetfield
