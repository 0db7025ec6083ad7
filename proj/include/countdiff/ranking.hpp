#ifndef COUNTDIFF_RANKING_HPP
#define COUNTDIFF_RANKING_HPP

#include <optional>
#include <string>
#include <vector>

#include "expression.hpp"
#include "polynomial.hpp"

namespace countdiff {

/// Polynomial over Q in ranked variables identified by their rank (index 0
/// is the smallest variable).
using AlgebraicPolynomial = Polynomial<unsigned, Rational>;

/// Total order on finitely many named variables: y_0 < y_1 < ... .
class Ranking {
public:
    Ranking() = default;
    explicit Ranking(std::vector<std::string> names) : names_(std::move(names)) {
        for (std::size_t i = 0; i < names_.size(); ++i) {
            if (names_[i].empty()) throw InvalidSystem("empty variable name");
            for (std::size_t j = 0; j < i; ++j)
                if (names_[j] == names_[i]) throw InvalidSystem("variable '" + names_[i] + "' declared twice");
        }
    }

    std::size_t size() const { return names_.size(); }
    const std::string &name(unsigned i) const { return names_.at(i); }
    const std::vector<std::string> &names() const { return names_; }

    std::optional<unsigned> index_of(const std::string &name) const {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return static_cast<unsigned>(i);
        return std::nullopt;
    }

    friend bool operator==(const Ranking &a, const Ranking &b) { return a.names_ == b.names_; }

private:
    std::vector<std::string> names_;
};

namespace detail {

/// Canonical spelling `u[1,0,2]` of an indexed name, indices evaluated in ctx.
inline std::string indexed_name(const Expr &e, RationalContext ctx) {
    std::string name = e.name + "[";
    for (std::size_t k = 0; k < e.args.size(); ++k) {
        const long v = ctx.integer(e.arg(k));
        if (v < 0) e.arg(k).fail("negative index");
        name += (k ? "," : "") + std::to_string(v);
    }
    return name + "]";
}

/// Evaluates parsed text into a polynomial over Q in the ranked variables.
struct AlgebraicContext {
    const Ranking &ranking;

    AlgebraicPolynomial one() const { return AlgebraicPolynomial(Rational(1)); }

    AlgebraicPolynomial leaf(const Expr &e) {
        if (e.kind == Expr::Kind::Number) return AlgebraicPolynomial(e.value);
        if (e.kind == Expr::Kind::Symbol) {
            auto i = ranking.index_of(e.name);
            if (!i) e.fail("unknown variable '" + e.name + "'");
            return AlgebraicPolynomial::variable(*i);
        }
        if (e.kind == Expr::Kind::Indexed) {
            const std::string name = indexed_name(e, RationalContext());
            auto i = ranking.index_of(name);
            if (!i) e.fail("unknown variable '" + name + "'");
            return AlgebraicPolynomial::variable(*i);
        }
        e.fail("unexpected '" + e.name + "' in polynomial");
    }

    AlgebraicPolynomial divide(const AlgebraicPolynomial &a, const AlgebraicPolynomial &b, const Expr &e) {
        if (!b.is_constant() || b.is_zero()) e.fail("only division by nonzero constants is allowed");
        return a.scaled(Rational(1) / b.constant_coefficient());
    }

    unsigned exponent(const Expr &e) { return RationalContext().exponent(e); }

    AlgebraicPolynomial factorial(const AlgebraicPolynomial &a, const Expr &e) {
        if (!a.is_constant()) e.fail("factorial of a non-constant");
        return AlgebraicPolynomial(RationalContext().factorial(a.constant_coefficient(), e));
    }
};

} // namespace detail

inline AlgebraicPolynomial parse_polynomial(const std::string &text, const Ranking &ranking, std::size_t line = 1,
                                            std::size_t column_offset = 0) {
    detail::AlgebraicContext ctx{ranking};
    return evaluate_expression<AlgebraicPolynomial>(*parse_expression(text, line, column_offset), ctx);
}

inline std::string to_string(const AlgebraicPolynomial &p, const Ranking &ranking) {
    return render(p, [&](unsigned v) { return ranking.name(v); });
}

/// Deterministic order on polynomials: by leader (constants first), then term
/// by term.
inline bool canonical_polynomial_less(const AlgebraicPolynomial &a, const AlgebraicPolynomial &b) {
    auto la = a.greatest_variable();
    auto lb = b.greatest_variable();
    if (la != lb) return !la || (lb && *la < *lb);
    return canonical_less(a, b, [](const Rational &x, const Rational &y) { return x < y; });
}

} // namespace countdiff

#endif // COUNTDIFF_RANKING_HPP
