#include <cctype>
#include <charconv>
#include <cstdlib>
#include <limits>

#include "fbmsde/error.hpp"
#include "fbmsde/expr.hpp"

namespace fbmsde {

namespace {

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    Expr parse_all() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError("empty expression", pos_);
        Expr e = parse_sum();
        skip_ws();
        if (pos_ < src_.size()) throw ParseError(std::string("unexpected '") + src_[pos_] + "'", pos_);
        return e;
    }

private:
    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            if (pos_ >= src_.size()) throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
            throw ParseError(std::string("expected '") + c + "'", pos_);
        }
    }

    Expr parse_sum() {
        Expr lhs = parse_product();
        for (;;) {
            if (accept('+')) {
                lhs = Expr::binary(ExprOp::add, std::move(lhs), parse_product());
            } else if (accept('-')) {
                lhs = Expr::binary(ExprOp::sub, std::move(lhs), parse_product());
            } else {
                return lhs;
            }
        }
    }

    Expr parse_product() {
        Expr lhs = parse_power();
        for (;;) {
            if (accept('*')) {
                lhs = Expr::binary(ExprOp::mul, std::move(lhs), parse_power());
            } else if (accept('/')) {
                lhs = Expr::binary(ExprOp::div, std::move(lhs), parse_power());
            } else {
                return lhs;
            }
        }
    }

    Expr parse_power() {
        Expr base = parse_unary();
        while (accept('^')) base = Expr::power(std::move(base), parse_integer_exponent());
        return base;
    }

    int parse_integer_exponent() {
        skip_ws();
        const std::size_t start = pos_;
        bool parens = accept('(');
        skip_ws();
        bool negative = false;
        if (pos_ < src_.size() && (src_[pos_] == '-' || src_[pos_] == '+')) {
            negative = src_[pos_] == '-';
            ++pos_;
            skip_ws();
        }
        const std::size_t digits_start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ == digits_start) throw ParseError("exponent must be an integer constant", start);
        if (pos_ < src_.size() && (src_[pos_] == '.' || src_[pos_] == 'e' || src_[pos_] == 'E')) {
            throw ParseError("exponent must be an integer constant", start);
        }
        int value = 0;
        auto [ptr, ec] = std::from_chars(src_.data() + digits_start, src_.data() + pos_, value);
        if (ec != std::errc{} || value > 64) throw ParseError("exponent out of range", digits_start);
        if (parens) expect(')');
        return negative ? -value : value;
    }

    Expr parse_unary() {
        if (accept('-')) return Expr::unary(ExprOp::neg, parse_unary());
        return parse_primary();
    }

    Expr parse_primary() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            Expr inner = parse_sum();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }

    Expr parse_number() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) ++pos_;
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
            if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
                pos_ = look;
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            }
        }
        const std::string text(src_.substr(start, pos_ - start));
        char* end = nullptr;
        const double v = std::strtod(text.c_str(), &end);
        if (end != text.c_str() + text.size()) throw ParseError("malformed number '" + text + "'", start);
        return Expr::constant(v);
    }

    Expr parse_identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
            ++pos_;
        }
        const std::string name(src_.substr(start, pos_ - start));
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == '(') {
            ExprOp op;
            if (name == "sin") {
                op = ExprOp::sin;
            } else if (name == "cos") {
                op = ExprOp::cos;
            } else if (name == "exp") {
                op = ExprOp::exp;
            } else if (name == "tanh") {
                op = ExprOp::tanh;
            } else {
                throw ParseError("unknown function '" + name + "'", start);
            }
            ++pos_;
            Expr arg = parse_sum();
            expect(')');
            return Expr::unary(op, std::move(arg));
        }
        if (name == "x") return Expr::var();
        if (name == "sin" || name == "cos" || name == "exp" || name == "tanh") {
            throw ParseError("function '" + name + "' needs an argument", start);
        }
        return Expr::param(name);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view source) { return Parser(source).parse_all(); }

}  // namespace fbmsde
