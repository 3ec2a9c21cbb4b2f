#pragma once

// Recursive-descent parser for the scalar expression grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' integer)?
//   base   := rational | ident | '(' expr ')' | '-' base
// Whitespace insignificant. Negative exponents desugar to denominators.

#include <cctype>
#include <stdexcept>
#include <string>

#include "gla/scalar.hpp"

namespace gla {

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
    std::size_t position;
};

class ExprParser {
public:
    ExprParser(std::string source, std::shared_ptr<const CoordinateSet> coords)
        : src_(std::move(source)), coords_(std::move(coords)) {}

    ScalarExpr parse() {
        ScalarExpr e = expr();
        skip_ws();
        if (pos_ != src_.size()) throw ParseError("unexpected trailing input", pos_);
        return e;
    }

private:
    ScalarExpr expr() {
        ScalarExpr e = term();
        for (;;) {
            skip_ws();
            if (accept('+')) e += term();
            else if (accept('-')) e -= term();
            else return e;
        }
    }

    ScalarExpr term() {
        ScalarExpr e = factor();
        for (;;) {
            skip_ws();
            if (accept('*')) {
                e *= factor();
            } else if (accept('/')) {
                std::size_t at = pos_;
                ScalarExpr rhs = factor();
                if (rhs.is_zero()) throw ParseError("division by zero", at);
                e /= rhs;
            } else {
                return e;
            }
        }
    }

    ScalarExpr factor() {
        ScalarExpr e = base();
        skip_ws();
        if (accept('^')) {
            skip_ws();
            bool neg = accept('-');
            std::size_t at = pos_;
            if (pos_ >= src_.size() || !std::isdigit(byte(pos_)))
                throw ParseError("expected integer exponent", at);
            long exp = 0;
            while (pos_ < src_.size() && std::isdigit(byte(pos_))) {
                exp = exp * 10 + (src_[pos_] - '0');
                if (exp > 1'000'000) throw ParseError("exponent too large", at);
                ++pos_;
            }
            if (neg && e.is_zero()) throw ParseError("zero to a negative power", at);
            e = e.pow(static_cast<int>(neg ? -exp : exp));
        }
        return e;
    }

    ScalarExpr base() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
        char c = src_[pos_];
        if (c == '-') {
            ++pos_;
            return -base();
        }
        if (c == '(') {
            ++pos_;
            ScalarExpr e = expr();
            skip_ws();
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(byte(pos_))) return rational();
        if (std::isalpha(byte(pos_))) return ident();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    ScalarExpr rational() {
        Integer n = integer();
        skip_ws();
        // rational := integer ('/' positive-integer)?  -- only taken when the
        // slash is immediately followed by a number, otherwise '/' belongs to
        // the enclosing term.
        std::size_t save = pos_;
        if (accept('/')) {
            skip_ws();
            if (pos_ < src_.size() && std::isdigit(byte(pos_))) {
                std::size_t at = pos_;
                Integer d = integer();
                if (d == 0) throw ParseError("zero denominator in rational", at);
                return ScalarExpr::constant(coords_, Rational(n, d));
            }
            pos_ = save;
        }
        return ScalarExpr::constant(coords_, Rational(n));
    }

    Integer integer() {
        Integer v = 0;
        while (pos_ < src_.size() && std::isdigit(byte(pos_))) {
            v = v * 10 + (src_[pos_] - '0');
            ++pos_;
        }
        return v;
    }

    ScalarExpr ident() {
        std::size_t at = pos_;
        std::string name;
        while (pos_ < src_.size() &&
               (std::isalnum(byte(pos_)) || src_[pos_] == '_')) {
            name += src_[pos_++];
        }
        if (!coords_->contains(name))
            throw ParseError("unknown coordinate identifier '" + name + "'", at);
        return ScalarExpr::coordinate(coords_, name);
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(byte(pos_))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) { ++pos_; return true; }
        return false;
    }

    unsigned char byte(std::size_t i) const { return static_cast<unsigned char>(src_[i]); }

    std::string src_;
    std::shared_ptr<const CoordinateSet> coords_;
    std::size_t pos_ = 0;
};

inline ScalarExpr parse_expr(const std::string& source,
                             std::shared_ptr<const CoordinateSet> coords) {
    return ExprParser(source, std::move(coords)).parse();
}

inline ScalarExpr parse_expr(const std::string& source, const CoordinateSet& coords) {
    return parse_expr(source, std::make_shared<CoordinateSet>(coords));
}

}  // namespace gla
