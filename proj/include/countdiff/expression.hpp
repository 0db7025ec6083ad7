#ifndef COUNTDIFF_EXPRESSION_HPP
#define COUNTDIFF_EXPRESSION_HPP

#include <cctype>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "number.hpp"

namespace countdiff {

/// Untyped expression tree produced by the shared text grammar. Meaning is
/// given by whoever evaluates it (polynomials, rational functions, template
/// parameters, counting polynomials).
struct Expr {
    enum class Kind { Number, Symbol, Call, Indexed, Add, Sub, Mul, Div, Pow, Neg, Factorial };

    Kind kind = Kind::Number;
    Rational value;            // Number
    std::string name;          // Symbol, Call, Indexed
    std::vector<std::shared_ptr<const Expr>> args; // operands, call arguments or indices
    std::size_t line = 1;
    std::size_t column = 1;

    const Expr &arg(std::size_t i) const { return *args.at(i); }

    [[noreturn]] void fail(const std::string &what) const { throw ParseError(what, line, column); }
};

using ExprPtr = std::shared_ptr<const Expr>;

/// Comparison `lhs op rhs` used by template conditions.
struct Condition {
    ExprPtr lhs;
    std::string op;
    ExprPtr rhs;
};

/// Recursive-descent parser for
///   expr    := term (('+'|'-') term)*
///   term    := unary (('*'|'/') unary)*
///   unary   := ('-'|'+') unary | power
///   power   := postfix ('^' unary)?
///   postfix := primary '!'*
///   primary := number | ident ['(' args ')'] ['[' args ']'] | '(' expr ')'
class ExpressionParser {
public:
    ExpressionParser(std::string text, std::size_t line = 1, std::size_t column_offset = 0)
        : text_(std::move(text)), line_(line), offset_(column_offset) {}

    ExprPtr parse_all() {
        ExprPtr e = parse_expr();
        skip_space();
        if (pos_ != text_.size()) error("unexpected '" + std::string(1, text_[pos_]) + "'");
        return e;
    }

    Condition parse_condition() {
        Condition c;
        c.lhs = parse_expr();
        skip_space();
        static const char *ops[] = {"<=", ">=", "==", "!=", "<", ">"};
        for (const char *op : ops) {
            if (text_.compare(pos_, std::string(op).size(), op) == 0) {
                c.op = op;
                pos_ += c.op.size();
                break;
            }
        }
        if (c.op.empty()) error("expected comparison operator");
        c.rhs = parse_expr();
        skip_space();
        if (pos_ != text_.size()) error("unexpected text after condition");
        return c;
    }

    /// Parses a comma separated list of expressions filling the whole text.
    std::vector<ExprPtr> parse_list() {
        std::vector<ExprPtr> out;
        skip_space();
        if (pos_ == text_.size()) return out;
        out.push_back(parse_expr());
        skip_space();
        while (pos_ < text_.size() && text_[pos_] == ',') {
            ++pos_;
            out.push_back(parse_expr());
            skip_space();
        }
        if (pos_ != text_.size()) error("unexpected '" + std::string(1, text_[pos_]) + "'");
        return out;
    }

private:
    [[noreturn]] void error(const std::string &what) const {
        throw ParseError(what, line_, offset_ + pos_ + 1);
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::shared_ptr<Expr> node(Expr::Kind k, std::size_t at) const {
        auto e = std::make_shared<Expr>();
        e->kind = k;
        e->line = line_;
        e->column = offset_ + at + 1;
        return e;
    }

    std::shared_ptr<Expr> binary(Expr::Kind k, ExprPtr a, ExprPtr b, std::size_t at) const {
        auto e = node(k, at);
        e->args = {std::move(a), std::move(b)};
        return e;
    }

    ExprPtr parse_expr() {
        ExprPtr lhs = parse_term();
        for (;;) {
            skip_space();
            const std::size_t at = pos_;
            if (accept('+')) {
                lhs = binary(Expr::Kind::Add, lhs, parse_term(), at);
            } else if (accept('-')) {
                lhs = binary(Expr::Kind::Sub, lhs, parse_term(), at);
            } else {
                return lhs;
            }
        }
    }

    ExprPtr parse_term() {
        ExprPtr lhs = parse_unary();
        for (;;) {
            skip_space();
            const std::size_t at = pos_;
            if (accept('*')) {
                lhs = binary(Expr::Kind::Mul, lhs, parse_unary(), at);
            } else if (accept('/')) {
                lhs = binary(Expr::Kind::Div, lhs, parse_unary(), at);
            } else {
                return lhs;
            }
        }
    }

    ExprPtr parse_unary() {
        skip_space();
        const std::size_t at = pos_;
        if (accept('-')) {
            auto e = node(Expr::Kind::Neg, at);
            e->args = {parse_unary()};
            return e;
        }
        if (accept('+')) return parse_unary();
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_postfix();
        skip_space();
        const std::size_t at = pos_;
        if (accept('^')) return binary(Expr::Kind::Pow, base, parse_unary(), at);
        return base;
    }

    ExprPtr parse_postfix() {
        ExprPtr e = parse_primary();
        for (;;) {
            skip_space();
            // '!' followed by '=' is a comparison, not a factorial
            if (pos_ < text_.size() && text_[pos_] == '!' &&
                !(pos_ + 1 < text_.size() && text_[pos_ + 1] == '=')) {
                auto f = node(Expr::Kind::Factorial, pos_);
                ++pos_;
                f->args = {e};
                e = f;
            } else {
                return e;
            }
        }
    }

    std::vector<ExprPtr> parse_args(char close) {
        std::vector<ExprPtr> out;
        if (accept(close)) return out;
        out.push_back(parse_expr());
        while (accept(',')) out.push_back(parse_expr());
        if (!accept(close)) error(std::string("expected '") + close + "'");
        return out;
    }

    ExprPtr parse_primary() {
        skip_space();
        if (pos_ == text_.size()) error("unexpected end of expression");
        const std::size_t at = pos_;
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t end = pos_;
            while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
            auto e = node(Expr::Kind::Number, at);
            e->value = Rational(Integer(text_.substr(pos_, end - pos_)));
            pos_ = end;
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = pos_;
            while (end < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
                ++end;
            std::string name = text_.substr(pos_, end - pos_);
            pos_ = end;
            std::shared_ptr<Expr> e;
            if (pos_ < text_.size() && text_[pos_] == '(') {
                ++pos_;
                e = node(Expr::Kind::Call, at);
                e->name = name;
                e->args = parse_args(')');
            } else if (pos_ < text_.size() && text_[pos_] == '[') {
                ++pos_;
                e = node(Expr::Kind::Indexed, at);
                e->name = name;
                e->args = parse_args(']');
            } else {
                e = node(Expr::Kind::Symbol, at);
                e->name = name;
            }
            return e;
        }
        if (accept('(')) {
            ExprPtr e = parse_expr();
            if (!accept(')')) error("expected ')'");
            return e;
        }
        error("unexpected '" + std::string(1, c) + "'");
    }

    std::string text_;
    std::size_t line_;
    std::size_t offset_;
    std::size_t pos_ = 0;
};

inline ExprPtr parse_expression(const std::string &text, std::size_t line = 1, std::size_t column_offset = 0) {
    return ExpressionParser(text, line, column_offset).parse_all();
}

/// Evaluates an expression tree into a ring T. The context supplies
///   T leaf(const Expr&)                      numbers, symbols, calls, indexed names
///   T divide(const T&, const T&, const Expr&)
///   unsigned exponent(const Expr&)           value of an exponent subtree
///   T factorial(const T&, const Expr&)
template <class T, class Context> T evaluate_expression(const Expr &e, Context &ctx) {
    switch (e.kind) {
    case Expr::Kind::Add:
        return evaluate_expression<T>(e.arg(0), ctx) + evaluate_expression<T>(e.arg(1), ctx);
    case Expr::Kind::Sub:
        return evaluate_expression<T>(e.arg(0), ctx) - evaluate_expression<T>(e.arg(1), ctx);
    case Expr::Kind::Mul:
        return evaluate_expression<T>(e.arg(0), ctx) * evaluate_expression<T>(e.arg(1), ctx);
    case Expr::Kind::Div:
        return ctx.divide(evaluate_expression<T>(e.arg(0), ctx), evaluate_expression<T>(e.arg(1), ctx), e);
    case Expr::Kind::Neg:
        return -evaluate_expression<T>(e.arg(0), ctx);
    case Expr::Kind::Pow: {
        T base = evaluate_expression<T>(e.arg(0), ctx);
        unsigned k = ctx.exponent(e.arg(1));
        T r = ctx.one();
        for (unsigned i = 0; i < k; ++i) r = r * base;
        return r;
    }
    case Expr::Kind::Factorial:
        return ctx.factorial(evaluate_expression<T>(e.arg(0), ctx), e);
    default:
        return ctx.leaf(e);
    }
}

/// Evaluation to a plain rational number, with named integer parameters.
/// Used for exponents, template parameters and index expressions.
class RationalContext {
public:
    using Lookup = std::function<bool(const std::string &, Rational &)>;

    explicit RationalContext(Lookup lookup = nullptr) : lookup_(std::move(lookup)) {}

    Rational one() const { return Rational(1); }

    Rational leaf(const Expr &e) {
        switch (e.kind) {
        case Expr::Kind::Number:
            return e.value;
        case Expr::Kind::Symbol: {
            Rational v;
            if (lookup_ && lookup_(e.name, v)) return v;
            e.fail("unknown parameter '" + e.name + "'");
        }
        case Expr::Kind::Call:
            return call(e);
        default:
            e.fail("unexpected indexed name '" + e.name + "'");
        }
    }

    Rational divide(const Rational &a, const Rational &b, const Expr &e) {
        if (sgn(b) == 0) e.fail("division by zero");
        return a / b;
    }

    unsigned exponent(const Expr &e) {
        Rational v = evaluate_expression<Rational>(e, *this);
        if (!is_integer(v) || sgn(v) < 0) e.fail("exponent must be a nonnegative integer");
        return static_cast<unsigned>(v.get_num().get_ui());
    }

    Rational factorial(const Rational &a, const Expr &e) {
        if (!is_integer(a) || sgn(a) < 0) e.fail("factorial of a non-natural number");
        return Rational(countdiff::factorial(a.get_num().get_ui()));
    }

    long integer(const Expr &e) {
        Rational v = evaluate_expression<Rational>(e, *this);
        if (!is_integer(v)) e.fail("expected an integer");
        return v.get_num().get_si();
    }

    bool holds(const Condition &c) {
        Rational a = evaluate_expression<Rational>(*c.lhs, *this);
        Rational b = evaluate_expression<Rational>(*c.rhs, *this);
        if (c.op == "<") return a < b;
        if (c.op == "<=") return a <= b;
        if (c.op == ">") return a > b;
        if (c.op == ">=") return a >= b;
        if (c.op == "==") return a == b;
        return a != b;
    }

private:
    Rational call(const Expr &e) {
        if (e.name == "binom" && e.args.size() == 2) {
            long n = integer(e.arg(0));
            long k = integer(e.arg(1));
            if (k < 0 || n < 0 || k > n) return Rational(0);
            return Rational(binomial(static_cast<unsigned long>(n), static_cast<unsigned long>(k)));
        }
        e.fail("unknown function '" + e.name + "'");
    }

    Lookup lookup_;
};

} // namespace countdiff

#endif // COUNTDIFF_EXPRESSION_HPP
